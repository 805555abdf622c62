"""Quality metrics"""

from efid.metrics.quality import Metric, QualityScore, mse, psnr, snr, snr_seg

__all__ = ['Metric', 'QualityScore', 'mse', 'psnr', 'snr', 'snr_seg']
