"""Leadership-of-coordination inference from multivariate time series."""
