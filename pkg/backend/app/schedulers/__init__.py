"""Online schedulers: greedy priority lists, CMS, pooled composites and the doubling wrapper."""
