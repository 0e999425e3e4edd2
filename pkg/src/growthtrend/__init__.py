"""Linear versus exponential growth trends via ARIMA(p,1,q) grid selection."""

__version__ = "0.1.0"
