"""Certificate assembly: each command is a pure function params -> (results, witnesses).

Replaying a certificate re-runs its command on the recorded parameters and
compares the JSON-serialized results and witnesses; timing is not compared.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Callable

from . import codes, construction, geometry
from .errors import BudgetExceeded, DEFAULT_BUDGET, PreconditionError
from .field import build_tower

SCHEMA_VERSION = 1
ORACLE_NOTE = "m not odd >= 5: oracle mode"


def _params(p: int, e: int, m: int, s: int | None = None, with_q2m: bool = False):
    tower = build_tower(p, e, m, with_q2m=with_q2m)
    return tower, (construction.ConstructionParams(tower, s) if s is not None else None)


def run_construct(p: int, e: int, m: int, s: int, budget: int = DEFAULT_BUDGET) -> tuple[dict, list, dict]:
    tower, params = _params(p, e, m, s)
    report = construction.check_main_theorem(params, with_bruteforce=True, budget=budget)
    U = construction.build_U_sigma(params)
    results = {
        "dim_q": U.dim_q,
        "conditions": {"i": report.cond_i, "ii": report.cond_ii, "iii": report.cond_iii},
        "g_criterion": report.g_criterion,
        "factorial": report.factorial_criterion,
        "specialized": report.specialized,
        "scattered": report.bruteforce_scattered,
    }
    if params.oracle_mode:
        results["flag"] = ORACLE_NOTE
    witnesses = []
    if report.cond_iii_witness is not None:
        witnesses.append({"kind": "root of Q outside F_q", "x": report.cond_iii_witness})
    if report.g_witness is not None:
        g = report.g_witness
        witnesses.append({"kind": "G_{m-1}(gamma) = 0", "gamma": g,
                          "projective_roots": construction.projective_gamma_roots(params, g),
                          "q_plus_1": tower.q + 1})
    if report.scattered_witness is not None:
        witnesses.append({"kind": "point of weight >= 2", "point": report.scattered_witness})
    if not witnesses:
        Q = tower.Q
        witnesses.append({"kind": "exhaustive", "points_checked": Q * Q + Q + 1, "Q_evaluations": Q})
    return results, witnesses, tower.to_json()


def run_spectrum(p: int, e: int, m: int, s: int, budget: int = DEFAULT_BUDGET) -> tuple[dict, list, dict]:
    tower, params = _params(p, e, m, s)
    U = construction.build_U_sigma(params)
    spec = geometry.weight_spectrum(U, 2, budget)
    n_points = len(geometry.linear_set_points(U, budget))
    a = {(tower.q ** w - 1) // (tower.q - 1): c for w, c in spec.counts.items()}
    eqs = geometry.standard_equations(n_points, a, 3, tower.Q)
    results = {
        "spectrum": spec.to_json(),
        "linear_set_size": n_points,
        "standard_equations": list(eqs),
    }
    if m >= 5:
        closed = geometry.characters_closed_form(tower.q, m)
        results["closed_form"] = {str(w): c for w, c in closed.items()}
        results["closed_form_match"] = {int(k): v for k, v in spec.to_json().items()} == closed
    witnesses = [{"kind": "exhaustive", "lines": spec.total}]
    return results, witnesses, tower.to_json()


def run_code_report(p: int, e: int, m: int, s: int, budget: int = DEFAULT_BUDGET) -> tuple[dict, list, dict]:
    tower, params = _params(p, e, m, s)
    U = construction.build_U_sigma(params)
    C = codes.psi(U)
    dist = codes.weight_distribution(C, budget)
    minimal = codes.is_minimal(C, budget)
    dual = codes.dual_code(C)
    results = {
        "n": C.n, "k": C.k, "q": tower.q, "m": m,
        "d_min": dist.d_min,
        "distribution": dist.to_json(),
        "distribution_routes_agree": True,  # weight_distribution raises otherwise
        "minimal": minimal.holds,
        "minimal_routes": {"supports": minimal.by_supports, "cutting": minimal.by_cutting},
        "nondegenerate": codes.phi(C).dim_q == C.n,
        "dual": {"n": dual.n, "k": dual.k},
    }
    witnesses = []
    if minimal.pair is not None:
        witnesses.append({"kind": "nested supports", "u": list(minimal.pair[0]), "v": list(minimal.pair[1])})
    try:
        sat = geometry.is_saturating(U, 2, budget)
    except BudgetExceeded as exc:
        results["saturating"] = "skipped"
        witnesses.append({"kind": "budget", "what": exc.what, "cost": exc.cost})
    else:
        results["saturating"] = sat.holds
        if sat.holds:
            results["dual_covering_radius_over_q2m"] = {"value": 2, "source": "by correspondence"}
            witnesses.append({"kind": "exhaustive", "points_covered": sat.checked})
        else:
            witnesses.append({"kind": "unsaturated point", "point": list(sat.witness)})
    return results, witnesses, tower.to_json()


def run_equivalence(p: int, e: int, m: int, s: int, t: int, budget: int = DEFAULT_BUDGET) -> tuple[dict, list, dict]:
    tower = build_tower(p, e, m)
    verdict = construction.equivalence_decision(s, t, m)
    results = {"s": s, "t": t, "equivalent": verdict, "basis": "theorem: t in {s, m-s}"}
    witnesses = []
    if verdict:
        name, _ = construction.equivalence_witness(s, m, t)
        cost = tower.q ** 2 * tower.m ** 3
        if cost <= budget:
            results["witness_verified"] = construction.verify_equivalence_witness(tower, s, t)
        else:
            results["witness_verified"] = "skipped"
        witnesses.append({"kind": "map", "name": name,
                          "matrix": [[1, 0, 0], [0, 1, 0], [0, 0, 1]] if name == "identity"
                          else [[0, 0, 1], [0, 1, 0], [1, 0, 0]]})
    return results, witnesses, tower.to_json()


# -- scan ------------------------------------------------------------------------

def parse_grid(spec: str) -> list[tuple[int, int, int, int]]:
    """'p=2,3;e=1;m=5,7;s=all' -> sorted (p, e, m, s) rows."""
    fields: dict[str, str] = {}
    for part in spec.split(";"):
        if not part.strip():
            continue
        key, _, val = part.partition("=")
        fields[key.strip()] = val.strip()
    missing = {"p", "e", "m"} - set(fields)
    if missing:
        raise PreconditionError(f"grid is missing {sorted(missing)}")
    ints = lambda v: [int(x) for x in v.split(",") if x.strip()]  # noqa: E731
    rows = []
    for p in ints(fields["p"]):
        for e in ints(fields["e"]):
            for m in ints(fields["m"]):
                s_spec = fields.get("s", "all")
                ss = construction.valid_s(m) if s_spec == "all" else ints(s_spec)
                rows.extend((p, e, m, s) for s in ss)
    return sorted(set(rows))


def scan_row(row: tuple[int, int, int, int], budget: int) -> dict:
    p, e, m, s = row
    out: dict = {"p": p, "e": e, "m": m, "s": s}
    try:
        if (p ** e) ** m > budget:
            raise BudgetExceeded("field size", (p ** e) ** m, budget)
        _, params = _params(p, e, m, s)
        rep = construction.check_main_theorem(params, with_bruteforce=True, budget=budget)
        out.update(cond_i=rep.cond_i, cond_ii=rep.cond_ii, cond_iii=rep.cond_iii,
                   g_criterion=rep.g_criterion, factorial=rep.factorial_criterion,
                   scattered=rep.bruteforce_scattered, oracle_mode=params.oracle_mode)
    except BudgetExceeded:
        out["scattered"] = "skipped"
    except PreconditionError as exc:
        out["error"] = str(exc)
    return out


def _workers() -> int:
    cap = os.environ.get("SCATTERFORGE_THREADS")
    n = os.cpu_count() or 1
    return max(1, min(n, int(cap))) if cap else n


def run_scan(grid: str, budget: int = DEFAULT_BUDGET) -> tuple[dict, list, dict]:
    rows = parse_grid(grid)
    workers = min(_workers(), len(rows))
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            table = list(pool.map(scan_row, rows, [budget] * len(rows)))
    else:
        table = [scan_row(r, budget) for r in rows]
    return {"grid": grid, "rows": table}, [], {}


def theorem_consistency(table: list[dict]) -> bool:
    """No row may have conditions i-iii true and scattered false, or cond iii != G criterion."""
    for row in table:
        if row.get("cond_i") and row.get("cond_ii") and row.get("cond_iii") and row.get("scattered") is False:
            return False
        if "cond_iii" in row and row["cond_iii"] != row["g_criterion"]:
            return False
    return True


COMMANDS: dict[str, Callable] = {
    "construct": run_construct,
    "spectrum": run_spectrum,
    "code-report": run_code_report,
    "equivalence": run_equivalence,
    "scan": run_scan,
}


def make_certificate(command: str, params: dict, budget: int = DEFAULT_BUDGET) -> dict:
    start = time.perf_counter()
    results, witnesses, field_json = COMMANDS[command](**params, budget=budget)
    cert = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "params": dict(params, budget=budget),
        "field": field_json,
        "results": results,
        "witnesses": witnesses,
        "timing": {"seconds": round(time.perf_counter() - start, 4), "kernels": _kernel_name()},
    }
    return cert


def _kernel_name() -> str:
    from . import kernels
    return kernels.BACKEND


def canonical(cert: dict) -> str:
    """Serialization used for replay comparison (timing excluded)."""
    body = {k: v for k, v in cert.items() if k != "timing"}
    return json.dumps(body, sort_keys=True)


def replay(cert: dict) -> tuple[bool, dict]:
    """Recompute a certificate from its recorded parameters; (identical, fresh)."""
    if cert.get("schema_version") != SCHEMA_VERSION:
        raise PreconditionError(f"unsupported schema_version {cert.get('schema_version')!r}")
    params = dict(cert["params"])
    budget = params.pop("budget", DEFAULT_BUDGET)
    fresh = make_certificate(cert["command"], params, budget)
    return canonical(fresh) == canonical(cert), fresh


def recorded_checks_hold(cert: dict) -> bool:
    """Re-verify the identities a certificate claims from its own recorded numbers."""
    res = cert.get("results", {})
    if cert.get("command") == "spectrum":
        f = cert["field"]
        q = f["p"] ** f["e"]
        Q = q ** f["m"]
        a = {(q ** int(w) - 1) // (q - 1): c for w, c in res["spectrum"].items()}
        return all(geometry.standard_equations(res["linear_set_size"], a, 3, Q))
    if cert.get("command") == "scan":
        return theorem_consistency(res.get("rows", []))
    return True


def spectrum_csv(cert: dict) -> str:
    res = cert["results"]
    closed = res.get("closed_form", {})
    lines = ["weight,count,closed_form,match"]
    for w, c in sorted(res["spectrum"].items(), key=lambda kv: int(kv[0])):
        cf = closed.get(w, "")
        lines.append(f"{w},{c},{cf},{str(cf == c).lower() if cf != '' else ''}")
    return "\n".join(lines) + "\n"


def scan_csv(cert: dict) -> str:
    cols = ["p", "e", "m", "s", "cond_i", "cond_ii", "cond_iii", "g_criterion", "factorial", "scattered"]
    lines = [",".join(cols)]
    for row in cert["results"]["rows"]:
        lines.append(",".join(str(row.get(c, "")).lower() for c in cols))
    return "\n".join(lines) + "\n"
