"""
Elastic arithmetic steered by named fidelity regions

Every elastic op computes the exact wrap-around result and passes it through
the FaultSpec of the innermost active region. Comparisons, loop counters and
address arithmetic are plain Python and never pass through here.
"""
from contextlib import contextmanager
from typing import Dict, Iterator, List, Mapping, Optional

from efid.fault.model import (
    RELIABLE_PLAN,
    RELIABLE_SPEC,
    FaultSpec,
    InjectionPlan,
    apply_plan,
    compile_spec,
    to_signed16,
    to_signed32,
)
from efid.fault.rng import RngStream, derive_stream
from efid.utils.exceptions import ConfigurationError, UsageError

RELIABLE_REGION = "reliable"

INT16_MAX = 32767
INT16_MIN = -32768


class FidelityContext:
    """Region table, active region stack and the stream feeding injections"""

    def __init__(
        self,
        regions: Optional[Mapping[str, FaultSpec]] = None,
        rng: Optional[RngStream] = None,
    ):
        """
        Initialize a context

        Args:
            regions: Region name -> FaultSpec; unmapped names are reliable
            rng: Stream supplying one draw per elastic op
        """
        table: Dict[str, FaultSpec] = {}
        for name, spec in (regions or {}).items():
            if not isinstance(name, str) or not name:
                raise ConfigurationError(f"Region names must be non-empty strings, got {name!r}")
            if name == RELIABLE_REGION and not spec.is_reliable:
                raise ConfigurationError("Region 'reliable' is reserved and must have rate 0")
            table[name] = spec

        self.regions: Dict[str, FaultSpec] = table
        self.rng = rng if rng is not None else derive_stream(0, [RELIABLE_REGION])
        self.op_counts: Dict[str, int] = {}
        self._plans: Dict[str, InjectionPlan] = {
            name: compile_spec(spec) for name, spec in table.items()
        }
        self._stack: List[str] = [RELIABLE_REGION]
        self._plan_stack: List[InjectionPlan] = [RELIABLE_PLAN]
        self._plan = RELIABLE_PLAN
        self._active = RELIABLE_REGION

    @classmethod
    def reliable(cls, rng: Optional[RngStream] = None) -> "FidelityContext":
        """A context with no unreliable regions"""
        return cls({}, rng)

    def spec_for(self, name: str) -> FaultSpec:
        """FaultSpec a region resolves to"""
        return self.regions.get(name, RELIABLE_SPEC)

    @property
    def active_region(self) -> str:
        return self._active

    @property
    def active_spec(self) -> FaultSpec:
        return self.spec_for(self._active)

    @property
    def depth(self) -> int:
        return len(self._stack)

    def enter_region(self, name: str) -> "FidelityContext":
        """Make `name` the innermost active region"""
        if not isinstance(name, str) or not name:
            raise UsageError(f"Region names must be non-empty strings, got {name!r}")
        plan = self._plans.get(name, RELIABLE_PLAN)
        self._stack.append(name)
        self._plan_stack.append(plan)
        self._plan = plan
        self._active = name
        return self

    def exit_region(self) -> "FidelityContext":
        """Restore the previously active region"""
        if len(self._stack) == 1:
            raise UsageError("Cannot exit the bottom 'reliable' region")
        self._stack.pop()
        self._plan_stack.pop()
        self._plan = self._plan_stack[-1]
        self._active = self._stack[-1]
        return self

    @contextmanager
    def region(self, name: str) -> Iterator["FidelityContext"]:
        """Run a block inside region `name`"""
        self.enter_region(name)
        try:
            yield self
        finally:
            self.exit_region()

    def _emit(self, exact: int) -> int:
        active = self._active
        self.op_counts[active] = self.op_counts.get(active, 0) + 1
        return apply_plan(exact, self._plan, self.rng.next_word())

    # 32-bit ops

    def add(self, a: int, b: int) -> int:
        return self._emit(to_signed32(a + b))

    def sub(self, a: int, b: int) -> int:
        return self._emit(to_signed32(a - b))

    def mul(self, a: int, b: int) -> int:
        return self._emit(to_signed32(a * b))

    def shl(self, a: int, n: int) -> int:
        if not 0 <= n < 32:
            raise UsageError(f"Shift amount must be in [0, 31], got {n}")
        return self._emit(to_signed32(a << n))

    def shr(self, a: int, n: int) -> int:
        """Arithmetic right shift"""
        if not 0 <= n < 32:
            raise UsageError(f"Shift amount must be in [0, 31], got {n}")
        return self._emit(to_signed32(a) >> n)

    # 16-bit ops: flips above bit 15 are truncated away

    def add16(self, a: int, b: int) -> int:
        return to_signed16(self._emit(to_signed16(a + b)))

    def sub16(self, a: int, b: int) -> int:
        return to_signed16(self._emit(to_signed16(a - b)))

    def mul16(self, a: int, b: int) -> int:
        return to_signed16(self._emit(to_signed16(a * b)))

    def shr16(self, a: int, n: int) -> int:
        if not 0 <= n < 16:
            raise UsageError(f"Shift amount must be in [0, 15], got {n}")
        return to_signed16(self._emit(to_signed16(a) >> n))

    def sat_add16(self, a: int, b: int) -> int:
        """16-bit elastic add with reliable overflow saturation"""
        result = self.add16(a, b)
        if a >= 0 and b >= 0 and result < 0:
            return INT16_MAX
        if a < 0 and b < 0 and result >= 0:
            return INT16_MIN
        return result

    def sat_sub16(self, a: int, b: int) -> int:
        """16-bit elastic subtract with reliable overflow saturation"""
        result = self.sub16(a, b)
        if a >= 0 and b < 0 and result < 0:
            return INT16_MAX
        if a < 0 and b >= 0 and result >= 0:
            return INT16_MIN
        return result

    def __repr__(self) -> str:
        return f"FidelityContext(active={self._active!r}, regions={sorted(self.regions)})"
