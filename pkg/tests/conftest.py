import numpy as np
import pytest

from flowbench.features import fit_transform
from flowbench.synth import generate_records

FIGURE_ROW = "50,TCP,A,WannaCry,1,1DA11mPS,1BonuSr7,1,500,5,A,Botnet,5061,SS"

HEADER = (
    "Time,Protocol,Flag,Family,Clusters,SeedAddress,ExpAddress,"
    "BTC,USD,Netflow_Bytes,IPaddress,Threats,Port,Prediction"
)


def csv_bytes(*rows: str) -> bytes:
    return ("\n".join([HEADER, *rows]) + "\n").encode()


@pytest.fixture(scope="session")
def synth_records():
    return generate_records(400, seed=7, signal_strength=0.9)


@pytest.fixture(scope="session")
def synth_matrix(synth_records):
    return fit_transform(synth_records, scale=True)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
