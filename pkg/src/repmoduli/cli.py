"""Batch verification driver.

Runs the exact and numerical check suites over selected group families and
writes a machine-readable report.  Exit status: 0 when every record passes,
1 on a check failure, 2 on a usage error.  Every flag can be preset through
an environment variable with the REPMODULI_ prefix (e.g. REPMODULI_SEED).
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone

from . import __version__
from .chars import (
    check_column_orthogonality, check_row_orthogonality, centralizer_checks,
    rho0_character, table_for, table_psl2_odd, table_sl2_odd, theta_balance,
)
from .groups import (
    build_subgroup, psl2_model, stored_fusion, fusion_table,
)
from .numerics import Tolerances
from .oscomplex import (
    brown_presentation, build_orbit_graph, moduli_dimension_report,
    euler_identity,
)

ENV_PREFIX = "REPMODULI_"
ALL_CHECKS = ("tables", "fusion", "centralizers", "moduli-dim", "euler",
              "brown", "numerics")
NUMERICS_GROUP_BOUND = 4000
FUSION_ENUM_BOUND = 19


class UsageError(ValueError):
    pass


@dataclass
class VerificationConfig:
    family: str
    qs: list
    k: int = 0
    checks: tuple = ALL_CHECKS
    seed: int = 0
    tol: Tolerances = field(default_factory=Tolerances)
    fmt: str = "json"
    out: str = ""
    jobs: int = 1


@dataclass
class Record:
    name: str
    anchor: str
    inputs: str
    expected: str
    computed: str
    passed: bool
    millis: int

    def to_json(self):
        return {"name": self.name, "anchor": self.anchor,
                "inputs": self.inputs, "expected": self.expected,
                "computed": self.computed, "pass": self.passed,
                "millis": self.millis}


@dataclass
class VerificationReport:
    header: dict
    records: list

    @property
    def ok(self):
        return all(r.passed for r in self.records)

    def to_json(self):
        return {"header": self.header,
                "records": [r.to_json() for r in self.records],
                "pass": self.ok}

    def to_text(self):
        lines = [f"repmoduli {self.header['version']} "
                 f"seed={self.header['seed']}"]
        for r in self.records:
            status = "PASS" if r.passed else "FAIL"
            lines.append(f"{status} {r.name} expected={r.expected} "
                         f"computed={r.computed} ({r.millis} ms)")
        lines.append("OVERALL " + ("PASS" if self.ok else "FAIL"))
        return "\n".join(lines)


def _is_power_of(base, q):
    n = 0
    while q % base == 0 and q > 1:
        q //= base
        n += 1
    return n if q == 1 else 0


def classify_q(family, q):
    """Map (family, q) to the internal table family; UsageError if invalid."""
    if family == "psl2":
        n = _is_power_of(2, q)
        if n >= 2:
            return "psl2_even"
        if q % 8 == 3 and q > 3 and any(_is_power_of(p, q)
                                        for p in range(3, q + 1, 2)
                                        if all(p % d for d in range(2, p))):
            return "psl2_odd"
        raise UsageError(f"q={q} is not in scope for PSL2 "
                         "(need 2^n, n>=2, or a prime power = 3 mod 8)")
    if family == "sz":
        n = _is_power_of(2, q)
        if n >= 3 and n % 2 == 1:
            return "sz"
        raise UsageError(f"q={q} is not in scope for Sz (need 2^n, odd n>=3)")
    if family == "dihedral":
        if q % 2 == 1 and q >= 3:
            return "dihedral"
        raise UsageError("dihedral tables need an odd n >= 3")
    if family == "cyclic":
        if q >= 1:
            return "cyclic"
        raise UsageError("cyclic tables need n >= 1")
    raise UsageError(f"unknown family {family!r}")


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, int((time.perf_counter() - t0) * 1000)


def _record(name, anchor, inputs, expected, computed, millis):
    return Record(name, anchor, inputs, str(expected), str(computed),
                  str(expected) == str(computed), millis)


def _skip(name, anchor, inputs, reason):
    return Record(name, anchor, inputs, "skipped", reason, True, 0)


def _table_stack(fam, q):
    if fam == "psl2_odd":
        return [table_sl2_odd(q), table_psl2_odd(q)]
    return [table_for(fam, q if fam not in ("dihedral",) else 2 * q)]


def check_tables(fam, q, cfg):
    records = []
    for table in _table_stack(fam, q):
        inputs = f"{table.family} q={table.q}"
        ok, ms = _timed(lambda t=table: check_row_orthogonality(t))
        records.append(_record(
            f"tables/rows/{table.family}-q{table.q}",
            f"tables/orthogonality/{table.family}-q{table.q}", inputs,
            True, ok, ms))
        ok, ms = _timed(lambda t=table: check_column_orthogonality(t))
        records.append(_record(
            f"tables/columns/{table.family}-q{table.q}",
            f"tables/orthogonality/{table.family}-q{table.q}", inputs,
            True, ok, ms))
    return records


def check_fusion(fam, q, cfg):
    name = f"fusion/{fam}-q{q}"
    if fam not in ("psl2_even", "psl2_odd"):
        return [_skip(name, name, f"q={q}", "skipped: class-data model")]
    if q > FUSION_ENUM_BOUND:
        return [_skip(name, name, f"q={q}",
                      "skipped: beyond enumeration scope")]

    def run():
        model = psl2_model(q)
        if fam == "psl2_even":
            rows = [("borel", 0), ("dihedral_split", 0),
                    ("dihedral_nonsplit", 0), ("cyclic", q - 1),
                    ("cyclic", 2)]
        else:
            rows = [("borel", 0), ("a4", 0), ("dihedral_split", 0),
                    ("dihedral_nonsplit", 0), ("cyclic", 2), ("klein4", 0),
                    ("cyclic", (q - 1) // 2), ("cyclic", 3)]
        bad = []
        for tag, param in rows:
            sub = build_subgroup(model, tag, param)
            brute = fusion_table(model, sub)
            stored = stored_fusion(fam, q, tag, param, model.class_labels)
            if brute != stored:
                bad.append(tag)
        return f"{len(rows)} subgroup rows equal" if not bad else \
            f"mismatch at {bad}"

    computed, ms = _timed(run)
    rows = 5 if fam == "psl2_even" else 8
    return [_record(name, name, f"q={q}",
                    f"{rows} subgroup rows equal", computed, ms)]


def check_centralizers(fam, q, cfg):
    records = []
    if fam == "dihedral":
        (p1, p2), ms = _timed(lambda: theta_balance(q))
        records.append(_record(
            f"centralizers/theta-balance-n{q}",
            f"theta-balance/dihedral-n{q}", f"n={q}",
            (True, True), (p1, p2), ms))
        return records
    if fam == "cyclic":
        return [_skip(f"centralizers/cyclic-n{q}", "centralizers/cyclic",
                      f"n={q}", "skipped: no distinguished character")]
    table = table_for(fam, q)
    checks, ms = _timed(lambda: centralizer_checks(table))
    per = max(1, ms // len(checks))
    for part, expected, computed in checks:
        records.append(_record(
            f"centralizers/{fam}-q{q}/{part}",
            f"centralizers/{fam}/part-{part}", f"q={q}",
            expected, computed, per))
    return records


def check_moduli_dim(fam, q, cfg):
    if fam not in ("psl2_even", "psl2_odd", "sz"):
        return [_skip(f"moduli-dim/{fam}-q{q}", "moduli-dim", f"q={q}",
                      "skipped: no orbit graph for this family")]
    table = table_for(fam, q)
    records = []
    for k in range(4):
        rep, ms = _timed(
            lambda k=k: moduli_dimension_report(build_orbit_graph(fam, q, k=k),
                                                table))
        records.append(_record(
            f"moduli-dim/{fam}-q{q}/k{k}",
            f"moduli-dim/{fam}", f"q={q} k={k}",
            f"dim {rep.dim_target}, equal",
            f"dim {rep.dim_quotient}, " +
            ("equal" if rep.equal else "unequal"), ms))
    return records


def check_euler(fam, q, cfg):
    name = f"euler/{fam}-q{q}"
    if fam not in ("psl2_even", "psl2_odd", "sz"):
        return [_skip(name, name, f"q={q}",
                      "skipped: no orbit graph for this family")]
    table = table_for(fam, q)
    graph = build_orbit_graph(fam, q)

    def run():
        count = 0
        for phi in table.chars:
            for psi in table.chars:
                lhs, rhs, eq = euler_identity(graph, table, phi, psi)
                if not eq:
                    return f"fails at ({phi.name},{psi.name}): {lhs} != {rhs}"
                count += 1
        return f"{count} ordered pairs equal"

    computed, ms = _timed(run)
    n = len(table.chars)
    return [_record(name, name, f"q={q}, one free 2-cell orbit",
                    f"{n * n} ordered pairs equal", computed, ms)]


def check_brown(fam, q, cfg):
    name = f"brown/{fam}-q{q}"
    if fam not in ("psl2_even", "psl2_odd"):
        return [_skip(name, name, f"q={q}", "skipped: class-data model")]
    if q > FUSION_ENUM_BOUND:
        return [_skip(name, name, f"q={q}",
                      "skipped: beyond enumeration scope")]

    def run():
        model = psl2_model(q)
        graph = build_orbit_graph(fam, q, k=cfg.k, model=model)
        pres = brown_presentation(graph, model)
        n_rel = len(pres.relations())
        return f"{n_rel} relations verified" if pres.verify() else "failed"

    computed, ms = _timed(run)
    return [_record(name, name, f"q={q} k={cfg.k}", computed, computed, ms)]


def check_numerics(fam, q, cfg):
    base = f"numerics/{fam}-q{q}"
    if fam == "sz":
        return [_skip(base, base, f"q={q}", "skipped: class-data model")]
    if fam not in ("psl2_even", "psl2_odd"):
        return [_skip(base, base, f"q={q}",
                      "skipped: no distinguished character")]
    order = q * (q * q - 1) // (1 if fam == "psl2_even" else 2)
    if order > NUMERICS_GROUP_BOUND:
        return [_skip(base, base, f"q={q}",
                      "skipped: beyond realization bound")]

    import numpy as np
    from .chars import centralizer_dim, fusion_for
    from .numerics import (
        commutant_rank, h_action, identity_moduli_point, random_h_point,
        random_moduli_point, realize_irreducible, rho_tau_eval,
        spectral_split, word_differential_check,
    )
    from .oscomplex import random_closed_path, random_kernel_word, random_word

    records = []
    seed = cfg.seed
    inputs = f"q={q} seed={seed}"
    table = table_for(fam, q)
    target = rho0_character(table)
    model = psl2_model(q)
    tol = cfg.tol

    rep, ms = _timed(lambda: realize_irreducible(model, table, target,
                                                 seed=seed, tol=tol))
    defect = max(rep.character_defect(target), rep.unitarity_defect())
    records.append(_record(
        f"{base}/realization", f"{base}/realization", inputs,
        f"degree {target.degree}, defects within tolerance",
        f"degree {rep.degree}, defects within tolerance"
        if defect <= tol.character else f"defect {defect:.2e}", ms))

    graph = build_orbit_graph(fam, q, k=cfg.k, model=model)
    pres = brown_presentation(graph, model)

    def spectral():
        ghat0 = next(g for g in graph.edges[0].sub.elements
                     if model.element_orders[g] == graph.edges[0].sub.order)
        ghat1 = next(g for g in graph.edges[1].sub.elements
                     if model.element_orders[g] == 2)
        _, m0 = spectral_split(rep, ghat0, tol=tol)
        _, m1 = spectral_split(rep, ghat1, tol=tol)
        return sorted(m0.values()), (m1.get(0, 0), m1.get(1, 0))

    (m0, m1), ms = _timed(spectral)
    if fam == "psl2_even":
        expect = ([1] * (q - 1), (q // 2 - 1, q // 2))
    else:
        expect = ([1] * ((q - 1) // 2), ((q + 1) // 4, (q - 3) // 4))
    records.append(_record(
        f"{base}/spectral", f"{base}/spectral-multiplicities", inputs,
        expect, (m0, m1), ms))

    def ranks():
        pairs = []
        for node in list(graph.vertices) + \
                [e for e in graph.edges if not e.free]:
            exact = centralizer_dim(target, fusion_for(table, node.sub))
            got = commutant_rank(rep, node.sub.elements, exact + 8,
                                 seed=seed + exact, tol=tol)
            pairs.append((exact, got))
        return pairs

    pairs, ms = _timed(ranks)
    records.append(_record(
        f"{base}/commutant-ranks", f"{base}/commutant-ranks", inputs,
        [e for e, _ in pairs], [g for _, g in pairs], ms))

    def moduli_mechanics():
        rng = random.Random(seed)
        nrng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(20):
            tau = random_moduli_point(graph, rep, nrng)
            alpha = random_h_point(graph, rep, nrng)
            moved = h_action(graph, rep, tau, alpha)
            for _ in range(50):
                w = random_word(pres, rng, 6)
                d = np.max(np.abs(rho_tau_eval(pres, rep, tau, w) -
                                  rho_tau_eval(pres, rep, moved, w)))
                worst = max(worst, float(d))
        one = identity_moduli_point(graph, rep.degree)
        universal = 0.0
        eye = np.eye(rep.degree)
        for _ in range(100):
            w = random_kernel_word(pres, rng)
            d = np.max(np.abs(rho_tau_eval(pres, rep, one, w) - eye))
            universal = max(universal, float(d))
        return worst, universal

    (worst, universal), ms = _timed(moduli_mechanics)
    records.append(_record(
        f"{base}/gauge-invariance", f"{base}/gauge-invariance", inputs,
        "within tolerance",
        "within tolerance" if worst <= tol.moduli_word
        else f"defect {worst:.2e}", ms))
    records.append(_record(
        f"{base}/universal-point", f"{base}/universal-point", inputs,
        "within tolerance",
        "within tolerance" if universal <= tol.universal
        else f"defect {universal:.2e}", ms))

    def differential():
        rng = random.Random(seed + 1)
        worst_rel = 0.0
        for i in range(10):
            legs = random_closed_path(graph, rng)
            f, fd, err = word_differential_check(pres, rep, legs,
                                                 seed=seed + i, tol=tol)
            rel = err / (1 + float(np.max(np.abs(f))))
            worst_rel = max(worst_rel, rel)
        return worst_rel

    worst_rel, ms = _timed(differential)
    records.append(_record(
        f"{base}/word-differential", f"{base}/word-differential", inputs,
        "within tolerance",
        "within tolerance" if worst_rel <= tol.jacobian_rel
        else f"relative error {worst_rel:.2e}", ms))
    return records


CHECK_RUNNERS = {
    "tables": check_tables,
    "fusion": check_fusion,
    "centralizers": check_centralizers,
    "moduli-dim": check_moduli_dim,
    "euler": check_euler,
    "brown": check_brown,
    "numerics": check_numerics,
}


def run(cfg: VerificationConfig) -> VerificationReport:
    jobs = []
    for q in cfg.qs:
        fam = classify_q(cfg.family, q)
        for check in cfg.checks:
            jobs.append((q, fam, check))

    def run_one(job):
        q, fam, check = job
        try:
            return CHECK_RUNNERS[check](fam, q, cfg)
        except Exception as e:          # a crashed check is a failing record
            return [Record(f"{check}/{fam}-q{q}", f"{check}/{fam}-q{q}",
                           f"q={q}", "completes",
                           f"error: {type(e).__name__}: {e}", False, 0)]

    if cfg.jobs > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            chunks = list(pool.map(run_one, jobs))
    else:
        chunks = [run_one(j) for j in jobs]
    records = [r for chunk in chunks for r in chunk]
    records.sort(key=lambda r: r.name)
    header = {
        "version": __version__,
        "seed": cfg.seed,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "family": cfg.family,
        "q": list(cfg.qs),
        "k": cfg.k,
        "checks": list(cfg.checks),
    }
    return VerificationReport(header, records)


def _env_default(name, fallback=None):
    return os.environ.get(ENV_PREFIX + name, fallback)


def build_parser():
    p = argparse.ArgumentParser(
        prog="repmoduli",
        description="exact and numerical verification batches over "
                    "PSL2(q), Sz(q), dihedral and cyclic tables")
    p.add_argument("--family", default=_env_default("FAMILY"),
                   choices=["psl2", "sz", "dihedral", "cyclic"],
                   required=_env_default("FAMILY") is None)
    p.add_argument("--q", default=_env_default("Q"), required=_env_default("Q") is None,
                   help="comma-separated list of q values (or n for "
                        "dihedral/cyclic)")
    p.add_argument("--k", type=int, default=int(_env_default("K", "0")),
                   help="free edge orbits attached at the root")
    p.add_argument("--checks", default=_env_default("CHECKS", ",".join(ALL_CHECKS)),
                   help="comma-separated subset of: " + ", ".join(ALL_CHECKS))
    p.add_argument("--seed", type=int, default=int(_env_default("SEED", "0")))
    p.add_argument("--tol", action="append", default=None,
                   metavar="NAME=VALUE",
                   help="tolerance override, repeatable "
                        "(e.g. --tol character=1e-5)")
    p.add_argument("--format", dest="fmt",
                   default=_env_default("FORMAT", "json"),
                   choices=["json", "text"])
    p.add_argument("--out", default=_env_default("OUT", ""),
                   help="output path (default: stdout)")
    p.add_argument("--jobs", type=int, default=int(_env_default("JOBS", "1")))
    return p


def parse_config(argv=None) -> VerificationConfig:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        qs = [int(x) for x in str(args.q).split(",") if x != ""]
        if not qs:
            raise UsageError("no q values given")
        checks = tuple(c.strip() for c in args.checks.split(",") if c.strip())
        for c in checks:
            if c not in ALL_CHECKS:
                raise UsageError(f"unknown check {c!r}")
        tol = Tolerances()
        env_tol = _env_default("TOL")
        tol_args = list(args.tol or ([env_tol] if env_tol else []))
        for spec in tol_args:
            name, _, value = spec.partition("=")
            if not hasattr(tol, name):
                raise UsageError(f"unknown tolerance {name!r}")
            v = float(value)
            if v <= 0:
                raise UsageError("tolerances must be positive")
            tol = replace(tol, **{name: v})
        if args.k < 0:
            raise UsageError("k must be >= 0")
        cfg = VerificationConfig(args.family, qs, args.k, checks, args.seed,
                                 tol, args.fmt, args.out, max(1, args.jobs))
        for q in qs:
            classify_q(cfg.family, q)
        return cfg
    except UsageError as e:
        parser.error(str(e))


def main(argv=None):
    cfg = parse_config(argv)
    report = run(cfg)
    payload = json.dumps(report.to_json(), indent=2) if cfg.fmt == "json" \
        else report.to_text()
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(payload + "\n")
    else:
        print(payload)
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
