import json
import time
from contextlib import contextmanager
from pathlib import Path

import pytest

from quasiquot.catalog import complex_cyclic, cyclic_rotations, dihedral, sign_line
from quasiquot.cli import corpus_specs, parse_spec
from quasiquot.invariants import generators, relations

CORPUS = Path(__file__).resolve().parents[1] / "src" / "quasiquot" / "corpus"

_ACCEPTANCE: list[tuple[str, bool, str]] = []


def record_acceptance(key: str, ok: bool, detail: str) -> None:
    _ACCEPTANCE.append((key, ok, detail))
    line = "%s %s %s" % (key, "PASS" if ok else "FAIL", detail)
    print(line)


@contextmanager
def criterion(key: str):
    """Collect details for one acceptance criterion and record PASS/FAIL.

    The body sets ``info["ok"]`` and may add entries to ``info``; an
    exception records FAIL with its message and propagates.
    """
    info: dict = {"ok": False}
    start = time.perf_counter()
    try:
        yield info
    except Exception as exc:
        record_acceptance(key, False, "raised %s: %s" % (type(exc).__name__, exc))
        raise
    info["seconds"] = round(time.perf_counter() - start, 2)
    detail = " ".join("%s=%s" % kv for kv in info.items() if kv[0] != "ok")
    record_acceptance(key, bool(info["ok"]), detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key, ok, detail in sorted(_ACCEPTANCE, key=lambda r: int(r[0][1:])):
        terminalreporter.write_line("%s %s %s" % (key, "PASS" if ok else "FAIL", detail))


@pytest.fixture(scope="session")
def line_basis():
    return generators(sign_line())


@pytest.fixture(scope="session")
def rot_bases():
    return {k: generators(cyclic_rotations(k)) for k in (2, 3, 4, 6)}


@pytest.fixture(scope="session")
def rot_relations(rot_bases):
    return {k: relations(b) for k, b in rot_bases.items()}


@pytest.fixture(scope="session")
def d8():
    return dihedral(4)


@pytest.fixture(scope="session")
def cz():
    return {k: generators(complex_cyclic(k)) for k in (2, 3, 4)}


@pytest.fixture(scope="session")
def corpus():
    return [(name, parse_spec(data, source=name)) for name, data in corpus_specs()]


@pytest.fixture
def corpus_dir():
    return CORPUS


def write_json(path: Path, data) -> str:
    path.write_text(json.dumps(data))
    return str(path)
