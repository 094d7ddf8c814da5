import datetime as dt

import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


@pytest.fixture
def csv_text():
    def make(values, start=dt.date(1999, 1, 1)):
        rows = ["date,inflow"]
        for i, v in enumerate(values):
            rows.append(f"{(start + dt.timedelta(days=i)).isoformat()},{v}")
        return "\n".join(rows) + "\n"

    return make


@pytest.fixture(scope="session")
def anomaly_setup():
    """Default network trained on a noisy 8-year seasonal record.

    Train 5 years, validate year 6, hold out years 7-8. tau comes from the
    validation one-step RMSE.
    """
    from inflowcast import anomaly, nn
    from inflowcast.ingest import SplitSpec
    from inflowcast.pipeline import prepare
    from inflowcast.synthetic import seasonal_inflow

    series = seasonal_inflow(years=8, amplitude=8000.0, noise=0.1, phi=0.0, seed=7)
    n = len(series)
    split = SplitSpec(range(0, 5 * 365), range(5 * 365, 6 * 365), range(6 * 365, n))
    prep = prepare(series, 3, split=split)
    net, _ = nn.fit(
        nn.init_params(nn.NetworkConfig(), seed=42),
        prep.train,
        prep.validation,
        nn.TrainConfig(epochs=60, learning_rate=3e-3),
    )
    tau = anomaly.calibrate_tau(net, prep.validation)
    return {"series": series, "prep": prep, "net": net, "tau": tau}
