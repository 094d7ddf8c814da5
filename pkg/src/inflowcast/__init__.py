"""Daily inflow forecasting with a hand-written stacked LSTM, Thomas-Fiering
synthetic flows, flood/drought flagging and reservoir release arithmetic."""

__version__ = "0.1.0"
