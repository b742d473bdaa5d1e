import pytest

from thzsim.channel import LinkConfig, deterministic_gains, misalignment_model

# High-precision (30 digit) evaluations of the reference link at d = 50 m,
# jitter variance 0.01 m^2, computed with mpmath independently of thzsim.
REF = {
    "p_w": 27.9481814267507682521013058483,
    "nu": 0.0137913552562303322240815720939,
    "g": 0.000318,
    "y1": 0.000136435928585069638659459197559,
    "y2": 0.000128248712330372389477346560144,
    "k_a": 0.000582684640915442028136805757704,
    "h_a": 0.985538471090043103451516140419,
    "h_p": 0.502943940200250702088092343625,
    "u": 0.208885689552583375201313773734,
    "w_eq": 0.608816102584799697713521057061,
    "a0": 0.0539718957096146746056841938997,
    "gamma": 3.0440805129239984885676052853,
    "A_40dB": 7.15684593833703816067349603285,
    "B": 4.63321308458181686459298864694,
    "bpsk_closed_40dB": 0.00312274874890947405584067216403,
    "qpsk_closed_40dB": 0.0610280690177402557373980931522,
    "bpsk_exact_40dB": 0.000828546468171295460959168122657,
    "qpsk_exact_40dB": 0.0193567672197999363161122943396,
}


@pytest.fixture
def ref():
    return REF


@pytest.fixture
def link():
    return LinkConfig()


@pytest.fixture
def gains(link):
    return deterministic_gains(link)


@pytest.fixture
def model(link):
    return misalignment_model(link)


ACCEPTANCE_RESULTS: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)
