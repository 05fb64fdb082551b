"""Deterministic daily stock-price forecasting toolkit.

Two forecasting tracks share one data spine: a windowed LSTM over
historical closes, and a random-forest regressor over daily news
sentiment plus macro features. Classical baselines (linear regression,
KNN, seasonal ARIMA, additive trend) and a walk-forward evaluation
harness round out the package.
"""

__version__ = "0.1.0"
