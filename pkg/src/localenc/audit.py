"""Reproduction audit of the symmetric-basis-state encodability chart.

Every |n,m> with 2 <= n <= 6 is run through each applicable construction
and the Gram verdict is compared with the chart's claims.  The chart has
three regions: the constructive set covers m in {0, 1, n-1, n}, the
inductive chain seeded at the three-qubit set covers six listed states,
and the explicit four-qubit set covers |4,2>.  |6,2> and |6,4> are
marked open by the source.

Flags: ``agree`` (claimed, passes), ``DISAGREE`` (claimed, fails),
``extra`` (not claimed, passes), ``-`` (not claimed, fails).

States left without a passing construction can additionally be handed to
the exhaustive subgroup search (``search_up_to``), which either certifies
an encoder or proves that no Pauli subgroup encodes the state.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from .encoders import (
    EncoderSet,
    GramReport,
    constructive_w_encoder,
    four_two_encoder,
    inductive_extend,
    verify_encoder,
    w3_encoder,
)
from .pauli import PauliString
from .search import SearchProblem, subgroup_search
from .state import expectation, symmetric_state

N_RANGE = range(2, 7)
AUDIT_TOL = 1e-10
INDUCTIVE_CLAIMS = {(4, 1), (4, 2), (4, 3), (5, 2), (5, 3), (6, 3)}
EXPLICIT_CLAIMS = {(4, 2)}
OPEN_STATES = {(6, 2), (6, 4)}
_DIGITS = 12
SEARCH_NODES = 10**9
SEARCH_SECONDS = 3600.0


def _r(v: float) -> float:
    # fixed rounding keeps the output byte-identical; + 0.0 folds -0.0
    return round(float(v), _DIGITS) + 0.0


def constructive_claimed(n: int, m: int) -> bool:
    return m in (0, 1, n - 1, n)


def claimed_by(n: int, m: int, construction: str) -> bool:
    if construction == "constructive":
        return constructive_claimed(n, m)
    if construction == "w3":
        return n == 3
    if construction == "inductive(w3)":
        return (n, m) in INDUCTIVE_CLAIMS
    if construction == "explicit_42":
        return (n, m) in EXPLICIT_CLAIMS
    return False


def region(n: int, m: int) -> str:
    marks = []
    if constructive_claimed(n, m):
        marks.append("dashed")
    if (n, m) in INDUCTIVE_CLAIMS:
        marks.append("triangle")
    if (n, m) in EXPLICIT_CLAIMS:
        marks.append("circle")
    if (n, m) in OPEN_STATES:
        marks.append("open")
    return "+".join(marks) if marks else "none"


def flag(claimed: bool, passed: bool) -> str:
    if claimed:
        return "agree" if passed else "DISAGREE"
    return "extra" if passed else "-"


def _inductive_chain(seed: EncoderSet, name: str) -> dict[int, tuple[str, EncoderSet]]:
    out = {seed.n: ("seed", seed)}
    e = seed
    while e.n < max(N_RANGE):
        e = inductive_extend(e)
        out[e.n] = (f"inductive({name})", e)
    return out


def constructions(n: int) -> list[tuple[str, EncoderSet]]:
    """All constructions attempted on n qubits, in report order."""
    items = [("constructive", constructive_w_encoder(n))]
    if n == 3:
        items.append(("w3", w3_encoder()))
    if n == 2:
        x1 = EncoderSet(1, (PauliString.from_label("I"), PauliString.from_label("X")), "x1")
        items.append(("inductive(x1)", inductive_extend(x1)))
    if n >= 4:
        items.append(_inductive_chain(w3_encoder(), "w3")[n])
    if n == 4:
        items.append(("explicit_42", four_two_encoder()))
    return items


@dataclass
class AuditRow:
    n: int
    m: int
    construction: str
    claimed: bool
    report: GramReport
    z1: float
    branches_pass: bool | None = None

    @property
    def flag(self) -> str:
        return flag(self.claimed, self.report.passed)

    def to_json(self) -> dict:
        first = self.report.offenders[0] if self.report.offenders else None
        return {
            "n": self.n,
            "m": self.m,
            "construction": self.construction,
            "claimed": self.claimed,
            "pass": self.report.passed,
            "max_offdiag": _r(self.report.max_offdiag),
            "min_diag": _r(self.report.min_diag),
            "offenders": len(self.report.offenders),
            "first_offender": None if first is None else [first[0], first[1], _r(first[2])],
            "z1": _r(self.z1),
            "branches_pass": self.branches_pass,
            "flag": self.flag,
        }


@dataclass
class SearchVerdict:
    n: int
    m: int
    exhausted: bool
    nodes: int
    encoder: list[str] | None

    def to_json(self) -> dict:
        return {"exhausted": self.exhausted, "nodes": self.nodes, "encoder": self.encoder}

    @property
    def summary(self) -> str:
        if self.encoder is not None:
            return "subgroup encoder found"
        return "no Pauli subgroup encoder" if self.exhausted else "search budget reached"


@dataclass
class AuditReport:
    rows: list[AuditRow] = field(default_factory=list)
    tol: float = AUDIT_TOL
    searches: dict[tuple[int, int], SearchVerdict] = field(default_factory=dict)

    def states(self) -> list[dict]:
        out = []
        for n in N_RANGE:
            for m in range(n + 1):
                rows = [r for r in self.rows if (r.n, r.m) == (n, m)]
                passing = [r.construction for r in rows if r.report.passed]
                verdict = self.searches.get((n, m))
                if passing:
                    status = "encoded"
                elif verdict is not None and verdict.encoder is not None:
                    status = "encoded (search)"
                elif verdict is not None and verdict.exhausted:
                    status = "no Pauli subgroup encoder"
                elif (n, m) in OPEN_STATES:
                    status = "open (no construction)"
                else:
                    status = "no passing construction"
                entry = {
                    "n": n,
                    "m": m,
                    "region": region(n, m),
                    "status": status,
                    "encoded_by": passing,
                    "disagreements": [r.construction for r in rows if r.flag == "DISAGREE"],
                }
                if verdict is not None:
                    entry["subgroup_search"] = verdict.to_json()
                out.append(entry)
        return out

    def summary(self) -> dict:
        counts = {"agree": 0, "DISAGREE": 0, "extra": 0, "-": 0}
        for r in self.rows:
            counts[r.flag] += 1
        return counts

    def to_json(self) -> dict:
        return {
            "tol": self.tol,
            "searched": sorted([n, m] for n, m in self.searches),
            "summary": self.summary(),
            "states": self.states(),
            "rows": [r.to_json() for r in self.rows],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"

    def to_table(self) -> str:
        head = f"{'state':<7} {'construction':<15} {'claimed':<7} {'pass':<5} {'max_offdiag':>12} {'z1':>8} {'branches':<8}  flag"
        lines = [head, "-" * len(head)]
        for r in self.rows:
            br = "-" if r.branches_pass is None else ("pass" if r.branches_pass else "FAIL")
            lines.append(
                f"|{r.n},{r.m}>  {r.construction:<15} {'yes' if r.claimed else 'no':<7} "
                f"{'pass' if r.report.passed else 'FAIL':<5} {_r(r.report.max_offdiag):>12.3e} {_r(r.z1):>8.4f} {br:<8}  {r.flag}"
            )
        lines.append("")
        for st in self.states():
            extra = f"; disagrees: {', '.join(st['disagreements'])}" if st["disagreements"] else ""
            if "subgroup_search" in st:
                extra += f"; subgroup search: {st['subgroup_search']['nodes']} nodes"
            lines.append(f"|{st['n']},{st['m']}>  region={st['region']:<16} {st['status']}{extra}")
        s = self.summary()
        lines.append("")
        lines.append(f"agree={s['agree']} DISAGREE={s['DISAGREE']} extra={s['extra']} unclaimed-fail={s['-']}")
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        cols = ["n", "m", "construction", "claimed", "pass", "max_offdiag", "min_diag", "offenders", "z1", "branches_pass", "flag"]
        w = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for r in self.rows:
            w.writerow(r.to_json())
        return buf.getvalue()


def reproduction_report(tol: float = AUDIT_TOL, search_up_to: int = 0) -> AuditReport:
    """Run every construction on every |n,m>; optionally search states no construction encodes.

    ``search_up_to`` bounds n for the exhaustive subgroup search (0 disables
    it).  At n = 6 the search takes a few minutes per state.
    """
    report = AuditReport(tol=tol)
    for n in N_RANGE:
        z_first = PauliString.single(n, 0, "Z")
        items = constructions(n)
        for m in range(n + 1):
            s = symmetric_state(n, m)
            z1 = expectation(z_first, s).real
            for name, enc in items:
                branches = None
                if name.startswith("inductive"):
                    base = EncoderSet(n - 1, tuple(_drop_first(p) for p in enc.elements[: 1 << (n - 1)]), "base")
                    # branches |n-1,m> and |n-1,m-1>, where they exist
                    subs = [symmetric_state(n - 1, k) for k in (m, m - 1) if 0 <= k <= n - 1]
                    branches = all(verify_encoder(b, base, tol).passed for b in subs)
                rep = verify_encoder(s, enc, tol)
                report.rows.append(AuditRow(n, m, name, claimed_by(n, m, name), rep, z1, branches))
            if n <= search_up_to and not any(r.report.passed for r in report.rows if (r.n, r.m) == (n, m)):
                report.searches[(n, m)] = _search(n, m)
    return report


def _search(n: int, m: int) -> SearchVerdict:
    problem = SearchProblem(symmetric_state(n, m), max_nodes=SEARCH_NODES, max_seconds=SEARCH_SECONDS, max_solutions=1)
    result = subgroup_search(problem)
    encoder = [str(p) for p in result.solutions[0].encoder.elements] if result.solutions else None
    return SearchVerdict(n, m, result.exhausted, result.nodes, encoder)


def _drop_first(p: PauliString) -> PauliString:
    n = p.n - 1
    mask = (1 << n) - 1
    return PauliString.from_key(n, ((p.x & mask) << n) | (p.z & mask))
