import sys

from efid.main import main

sys.exit(main())
