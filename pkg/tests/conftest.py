from __future__ import annotations

from datetime import date

import pytest

from momentum_rank.core import DeltaSystem, ScoreSnapshot, invert_gains

START = date(2021, 5, 1)
END = date(2021, 8, 1)

# Momentum leaders for the 90 days ending 2021-08-01: (name, rank, g, r).
SUMMER_LEADERS = [
    ("Eileen Agar", 2169, 801.55, 80.6),
    ("Sophie Taeuber-Arp", 1183, 866.66, 35.62),
    ("Joseph Beuys", 45, 3270.62, 6.49),
    ("Danielle Mckinney", 7399, 332.62, 198.52),
    ("Maya Lin", 415, 943.58, 11.84),
    ("Basquiat", 9, 7124.31, 4.07),
    ("Alice Neel", 269, 1137.05, 9.69),
    ("Paula Rego", 326, 1068.54, 10.51),
    ("Van Gogh", 3, 8640.25, 0.98),
]

MUTU = ("Wangechi Mutu", 682.29, 9.41)
WILLIAMS = ("Kandis Williams", 375.63, 59.88)
KHARI_TURNER = ("Khari Turner", 211.74, 72.11)


def brute_force_frontier(vectors) -> set[int]:
    """Indices not strictly beaten in both coordinates by any other vector."""
    out = set()
    for i, (gi, ri) in enumerate(vectors):
        if not any(gj > gi and rj > ri for j, (gj, rj) in enumerate(vectors) if j != i):
            out.add(i)
    return out


def snapshots_from_gains(rows, start=START, end=END) -> tuple[ScoreSnapshot, ScoreSnapshot]:
    """Invert ``(name, g, r)`` rows into a before/after snapshot pair."""
    before, after = {}, {}
    for name, g, r in rows:
        before[name], after[name] = invert_gains(g, r)
    return ScoreSnapshot(start, before), ScoreSnapshot(end, after)


def leader_rows(*extra):
    return [(name, g, r) for name, _, g, r in SUMMER_LEADERS] + list(extra)


@pytest.fixture
def leader_system() -> DeltaSystem:
    """Leader rows ordered by their published media-index rank."""
    rows = sorted(SUMMER_LEADERS, key=lambda t: t[1])
    return DeltaSystem.from_gains([(name, g, r) for name, _, g, r in rows], START, END)


def write_csv(path, snap: ScoreSnapshot) -> None:
    from momentum_rank.ingest import save_snapshot_file

    save_snapshot_file(snap, path)


_criteria: dict[int, tuple[str, str, str]] = {}


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None or report.when == "teardown":
        return
    n, title = marker
    if report.when == "setup" and report.passed:
        return
    status = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
    note = ""
    if report.failed and report.longrepr is not None:
        note = str(getattr(report.longrepr, "reprcrash", None) and report.longrepr.reprcrash.message or "")
        note = note.splitlines()[0] if note else ""
    _criteria[n] = (status, title, note)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = marker.args


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        status, title, note = _criteria[n]
        line = f"criterion {n:2d} {status}  {title}"
        if note:
            line += f"  [{note}]"
        terminalreporter.write_line(line)
