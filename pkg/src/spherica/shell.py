"""Command-line front end tying the exact and numeric components together.

Every invocation builds one :class:`Report`: the subcommand name, a digest of
the effective inputs, a list of named check verdicts, and the wall time.  The
report is printed as JSON (or an aligned table with ``--format table``) to
stdout or to ``--out``, and the process exits 0 exactly when every check
passed; usage errors exit 2, failed checks exit 1.

Subcommands: dualgroup, degen, scatter, lfactor, pgl-orbit, catalog-check.
Each accepts ``--seed``, ``--out`` and ``--format``; the Weyl enumeration cap
honors the SPHERICA_WEYL_CAP environment variable.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import _linalg as la
from .catalog import CatalogEntry, ColorAtom, entry_names, get_entry, load_catalog, reference_rows
from .degenerations import c_of_theta, center_surjectivity_all, verify_tiling
from .dualgroup import DualGroupError, build_dual_datum
from .lfactor import (
    BranchError,
    LFactorError,
    SatakeParam,
    c_factor,
    l_flat,
    l_sharp,
    q_factor,
)
from .padic import (
    PadicError,
    from_degeneration,
    in_j_orbit,
    random_theta_large,
    t_exp_for_level,
    to_degeneration,
)
from .scatter import (
    SemiInfiniteOperator,
    continuous_density,
    plancherel_defect,
    shift_vector,
    spectrum_report,
)
from .spherical import SphericalDatum


class UsageError(ValueError):
    """Bad inputs that a caller can fix: unknown entry, unreadable file."""


# ---------------------------------------------------------------------------
# Reports.


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class Report:
    """Machine-readable outcome of one command.

    Everything except ``elapsed_seconds`` is deterministic given identical
    inputs and seeds; the digest covers the effective inputs only.
    """

    command: str
    inputs: dict
    seed: int
    checks: list = field(default_factory=list)
    payload: dict = field(default_factory=dict)
    elapsed_seconds: float = 0.0

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(passed), detail))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def inputs_digest(self) -> str:
        blob = json.dumps(self.inputs, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "inputs_digest": self.inputs_digest,
            "seed": self.seed,
            "checks": [c.to_dict() for c in self.checks],
            "passed": self.passed,
            "payload": self.payload,
            "elapsed_seconds": round(self.elapsed_seconds, 3),
        }

    def render(self, fmt: str) -> str:
        data = self.to_dict()
        if fmt == "json":
            return json.dumps(data, indent=2, sort_keys=True)
        width = max([len(c.name) for c in self.checks] + [7])
        lines = [
            f"command : {self.command}",
            f"digest  : {data['inputs_digest']}",
            f"seed    : {self.seed}",
        ]
        for c in self.checks:
            mark = "pass" if c.passed else "FAIL"
            detail = f"  {c.detail}" if c.detail else ""
            lines.append(f"  {c.name.ljust(width)}  {mark}{detail}")
        lines.append(f"result  : {'pass' if self.passed else 'FAIL'}")
        lines.append(f"elapsed : {data['elapsed_seconds']} s")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# Input loading.


def _load_entry_or_datum(spec: str):
    """A catalog name or a JSON file; returns (entry or None, datum)."""
    if spec in entry_names():
        e = get_entry(spec)
        return e, e.datum
    if not os.path.exists(spec):
        raise UsageError(f"'{spec}' is neither a catalog entry nor a file")
    try:
        data = json.loads(open(spec).read())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read '{spec}': {exc}") from exc
    try:
        if isinstance(data, dict) and "datum" in data:
            e = CatalogEntry.from_dict(data)
            return e, e.datum
        return None, SphericalDatum.from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"'{spec}' does not hold a spherical datum: {exc}") from exc


def _parse_indices(text: str) -> tuple:
    if text in ("", "none"):
        return ()
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got '{text}'") from exc


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"expected a rational number, got '{text}'") from exc


def _read_json_file(path: str):
    if not os.path.exists(path):
        raise UsageError(f"file not found: '{path}'")
    try:
        return json.loads(open(path).read())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read '{path}': {exc}") from exc


def _complex_dict(z) -> dict:
    z = complex(z)
    return {"real": z.real, "imag": z.imag}


# ---------------------------------------------------------------------------
# Subcommands.


def _cmd_dualgroup(args) -> Report:
    entry, datum = _load_entry_or_datum(args.datum)
    rep = Report(
        "dualgroup",
        {"datum": args.datum, "variant": args.variant},
        args.seed,
    )
    try:
        dual = build_dual_datum(datum, variant=args.variant)
    except DualGroupError as exc:
        rep.add("dual-datum-built", False, str(exc))
        return rep
    rep.add("dual-datum-built", True, f"{dual.cartan_type} ({dual.group_name})")
    rep.payload["cartan_type"] = dual.cartan_type
    rep.payload["group_name"] = dual.group_name
    rep.payload["simple_roots"] = [list(r) for r in dual.simple_roots]
    rep.payload["lattice_rows"] = [list(r) for r in dual.lattice_rows]
    if entry is not None and args.variant == "gxprime":
        rep.add(
            "cartan-type-matches-catalog",
            dual.cartan_type == entry.dual_cartan,
            f"computed {dual.cartan_type}, expected {entry.dual_cartan}",
        )
    return rep


def _cmd_degen(args) -> Report:
    entry, datum = _load_entry_or_datum(args.datum)
    theta = _parse_indices(args.theta)
    rep = Report(
        "degen",
        {"datum": args.datum, "theta": list(theta), "tiling_samples": args.tiling_samples},
        args.seed,
    )
    try:
        c = c_of_theta(datum, theta)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rep.add("chamber-constant", True, f"c(theta) = {c}, orbit-sum identity holds")
    rep.payload["c_of_theta"] = c
    tiling = verify_tiling(datum, theta, n_samples=args.tiling_samples, seed=args.seed)
    rep.add(
        "tiling",
        tiling.passed,
        f"{tiling.covered_once}/{tiling.samples} samples in exactly one chamber, "
        f"{tiling.tile_count} tiles",
    )
    rep.add("tile-count-equals-constant", tiling.tile_count == c)
    rep.payload["center_surjective_all_faces"] = center_surjectivity_all(datum)
    if entry is not None:
        rep.add(
            "center-surjectivity-matches-wavefront",
            rep.payload["center_surjective_all_faces"] == entry.wavefront,
            f"expected wavefront = {entry.wavefront}",
        )
    return rep


def _plancherel_vectors(rng: random.Random, count: int, offset: int) -> list:
    # supports sit past the corner, where the diagonal density is exact
    out = []
    for _ in range(count):
        base = {
            0: Fraction(1),
            1: Fraction(rng.randint(-4, 4), 4),
            2: Fraction(rng.randint(-4, 4), 8),
            4: Fraction(rng.randint(-2, 2), 3),
        }
        shifted = shift_vector(base, offset + rng.randint(0, 5))
        out.append({n: float(v) for n, v in shifted.items()})
    return out


def _cmd_scatter(args) -> Report:
    if not os.path.exists(args.operator):
        raise UsageError(f"file not found: '{args.operator}'")
    try:
        op = SemiInfiniteOperator.from_json(open(args.operator).read())
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read operator from '{args.operator}': {exc}") from exc
    rep = Report(
        "scatter",
        {
            "operator": op.to_dict(),
            "spectrum": args.spectrum,
            "density": args.density,
            "check_plancherel": args.check_plancherel,
        },
        args.seed,
    )
    lo, hi = op.symbol().band()
    rep.payload["band"] = [lo, hi]
    packets = None
    if args.spectrum or args.check_plancherel:
        spec = spectrum_report(op)
        packets = spec["packets"]
        rep.payload["bound_states"] = [
            {"eigenvalue": pk.eigenvalue, "alphas": [float(a) for a in pk.alphas]}
            for pk in packets
        ]
        if args.spectrum:
            rep.add(
                "discrete-spectrum-cross-validated",
                True,
                f"{len(packets)} bound state(s) outside [{lo:g}, {hi:g}]",
            )
    if args.density:
        step = (hi - lo) / (args.density_points + 1)
        lines = ["lambda,density"]
        for i in range(1, args.density_points + 1):
            lam = lo + i * step
            lines.append(f"{lam:.12g},{continuous_density(op, lam):.12g}")
        rep.payload["density_csv"] = "\n".join(lines)
        rep.add("density-sampled", True, f"{args.density_points} interior points")
    if args.check_plancherel:
        rng = random.Random(args.seed)
        defects = []
        for f in _plancherel_vectors(rng, args.plancherel_vectors, op.corner_size + 30):
            defects.append(abs(plancherel_defect(op, f, packets=packets)))
        worst = max(defects)
        rep.payload["plancherel_defects"] = defects
        rep.add(
            "plancherel-defect-small",
            worst <= args.tolerance,
            f"max |defect| = {worst:.3e} over {len(defects)} vectors (tol {args.tolerance:g})",
        )
    if not (args.spectrum or args.density or args.check_plancherel):
        rep.add("operator-loaded", True, f"corner size {op.corner_size}")
    return rep


def _cmd_lfactor(args) -> Report:
    entry, datum = _load_entry_or_datum(args.datum)
    colors = None
    if args.colors is not None:
        raw = _read_json_file(args.colors)
        try:
            colors = tuple(
                ColorAtom.from_dict(c) if isinstance(c, dict) else tuple(c) for c in raw
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"bad color data in '{args.colors}': {exc}") from exc
    chi = None
    if args.chi is not None:
        try:
            chi = SatakeParam.from_dict(_read_json_file(args.chi))
        except (KeyError, TypeError, ValueError, LFactorError) as exc:
            raise UsageError(f"bad character data in '{args.chi}': {exc}") from exc
    subject = entry if (entry is not None and colors is None) else datum
    q = int(args.q) if args.q is not None else None
    s = _parse_fraction(args.s) if args.s is not None else None
    rep = Report(
        "lfactor",
        {
            "datum": args.datum,
            "colors": args.colors,
            "chi": args.chi,
            "q": q,
            "s": None if s is None else str(s),
            "whittaker": args.whittaker,
        },
        args.seed,
    )
    wh = True if args.whittaker else None
    try:
        fq = q_factor(subject)
        fc = c_factor(subject, colors=colors, whittaker=wh)
        fsharp = l_sharp(subject, colors=colors, whittaker=wh)
        fflat = l_flat(subject, colors=colors, whittaker=wh)
    except LFactorError as exc:
        rep.add("factored-forms-built", False, str(exc))
        return rep
    rep.add("factored-forms-built", True)
    rep.payload["q_factor"] = str(fq)
    rep.payload["c_factor"] = str(fc)
    rep.payload["l_sharp"] = str(fsharp)
    rep.payload["l_flat"] = str(fflat)
    rep.payload["l_sharp_atoms"] = fsharp.to_dict()
    if chi is not None and chi.branch_note:
        rep.payload["branch_note"] = chi.branch_note
    if q is not None:
        try:
            rep.payload["q_factor_value"] = _complex_dict(q_factor(subject, q=q, s=s))
            rep.add("q-factor-evaluated", True, f"at q={q}, s={s if s is not None else 0}")
        except (LFactorError, BranchError) as exc:
            rep.add("q-factor-evaluated", False, str(exc))
    if chi is not None:
        try:
            val = l_sharp(subject, colors=colors, chi=chi, q=q, s=s, whittaker=wh)
            rep.payload["l_sharp_value"] = _complex_dict(val)
            rep.add("l-sharp-evaluated", True)
        except (LFactorError, BranchError) as exc:
            rep.add("l-sharp-evaluated", False, str(exc))
    return rep


def _cmd_pgl_orbit(args) -> Report:
    n, p, m = args.n, args.p, args.level
    theta = _parse_indices(args.theta)
    if not (2 <= n):
        raise UsageError(f"n must be at least 2, got {n}")
    if m < 1:
        raise UsageError(f"level must be at least 1, got {m}")
    if not theta or not all(0 < d < n for d in theta) or list(theta) != sorted(set(theta)):
        raise UsageError(f"theta must be strictly increasing cuts inside (0, {n})")
    try:
        t_exp = t_exp_for_level(m)
    except PadicError as exc:
        raise UsageError(str(exc)) from exc
    rep = Report(
        "pgl-orbit",
        {"n": n, "p": p, "theta": list(theta), "level": m, "trials": args.trials},
        args.seed,
    )
    rng = random.Random(args.seed)
    failures = 0
    first_failure = None
    sample = None
    for trial in range(args.trials):
        a = random_theta_large(
            rng, n, p, theta, t_exp,
            grade_spread=rng.randint(0, 1), scalar=bool(trial % 2),
        )
        if sample is None:
            sample = a.to_dict()
        back = from_degeneration(to_degeneration(a, theta, t_exp), t_exp)
        if not in_j_orbit(a, back, m):
            failures += 1
            if first_failure is None:
                first_failure = a.to_dict()
    rep.payload["t_exp"] = t_exp
    rep.payload["trials"] = args.trials
    rep.payload["failures"] = failures
    rep.payload["sample_matrix"] = sample
    if first_failure is not None:
        rep.payload["first_failure"] = first_failure
    rep.add(
        "round-trip-into-source-orbit",
        failures == 0,
        f"{args.trials - failures}/{args.trials} trials, T_exp = {t_exp}",
    )
    return rep


def _check_entry(rep: Report, e: CatalogEntry) -> Optional[bool]:
    """Append per-entry checks; returns reference-row match when applicable."""
    prefix = e.name
    problems = e.datum.validate()
    if e.expect_fail is not None:
        rep.add(
            f"{prefix}:expected-failure",
            bool(problems),
            f"declared '{e.expect_fail}', validate reported {len(problems)} problem(s)",
        )
        return None
    rep.add(f"{prefix}:validates", not problems, "; ".join(problems))
    if problems:
        return False
    normalized = e.datum.normalize_roots()
    types_ok = tuple(nr.kind for nr in normalized) == e.root_types
    gammas_ok = tuple(nr.gamma for nr in normalized) == e.gammas
    levi_ok = e.datum.levi == e.levi
    rep.add(
        f"{prefix}:normalized-roots",
        types_ok and gammas_ok,
        f"types {''.join(nr.kind for nr in normalized)}",
    )
    rep.add(f"{prefix}:levi", levi_ok, f"{list(e.levi)}")
    try:
        dual = build_dual_datum(e.datum, "gxprime")
        dual_ok = dual.cartan_type == e.dual_cartan
        rep.add(f"{prefix}:dual-cartan", dual_ok, dual.cartan_type)
    except DualGroupError as exc:
        dual_ok = False
        rep.add(f"{prefix}:dual-cartan", False, str(exc))
    wf = e.datum.is_wavefront()
    rep.add(f"{prefix}:wavefront", wf == e.wavefront, f"wavefront = {str(wf).lower()}")
    order_ok = e.datum.little_weyl_group().order == e.weyl_order
    rep.add(f"{prefix}:weyl-order", order_ok, str(e.weyl_order))
    json_ok = CatalogEntry.from_json(e.to_json()).to_json() == e.to_json()
    rep.add(f"{prefix}:json-round-trip", json_ok)
    if e.reference_index is not None:
        return types_ok and gammas_ok and levi_ok and dual_ok
    return None


def _cmd_catalog_check(args) -> Report:
    rep = Report("catalog-check", {"entry": args.entry}, args.seed)
    if args.entry == "all":
        entries = load_catalog()
    else:
        if args.entry not in entry_names():
            raise UsageError(f"unknown catalog entry '{args.entry}'")
        entries = (get_entry(args.entry),)
    ref_results = []
    for e in entries:
        got = _check_entry(rep, e)
        if got is not None:
            ref_results.append(got)
    if args.entry == "all":
        total = len(reference_rows())
        rep.add(
            "reference-rows",
            sum(ref_results) == total and len(ref_results) == total,
            f"{sum(ref_results)}/{total} rank-one rows match computed data",
        )
    return rep


# ---------------------------------------------------------------------------
# Argument parsing and entry point.


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "table"), default="json")

    parser = argparse.ArgumentParser(
        prog="spherica",
        description="exact and numeric checks for spherical-variety data",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("dualgroup", parents=[common], help="dual root datum of a datum")
    p.add_argument("datum", help="catalog entry name or datum JSON file")
    p.add_argument("--variant", choices=("gx", "gxprime"), default="gx")
    p.set_defaults(func=_cmd_dualgroup)

    p = sub.add_parser("degen", parents=[common], help="chamber checks for one face")
    p.add_argument("datum", help="catalog entry name or datum JSON file")
    p.add_argument("--theta", default="", help="comma-separated root indices")
    p.add_argument("--tiling-samples", type=int, default=2000)
    p.set_defaults(func=_cmd_degen)

    p = sub.add_parser("scatter", parents=[common], help="spectral reports for an operator")
    p.add_argument("operator", help="semi-infinite operator JSON file")
    p.add_argument("--spectrum", action="store_true")
    p.add_argument("--density", action="store_true")
    p.add_argument("--density-points", type=int, default=64)
    p.add_argument("--check-plancherel", action="store_true")
    p.add_argument("--plancherel-vectors", type=int, default=3)
    p.add_argument("--tolerance", type=float, default=1e-6)
    p.set_defaults(func=_cmd_scatter)

    p = sub.add_parser("lfactor", parents=[common], help="unramified local factors")
    p.add_argument("datum", help="catalog entry name or datum JSON file")
    p.add_argument("--colors", default=None, help="JSON file with color data")
    p.add_argument("--chi", default=None, help="JSON file with a Satake parameter")
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--s", default=None)
    p.add_argument("--whittaker", action="store_true")
    p.set_defaults(func=_cmd_lfactor)

    p = sub.add_parser("pgl-orbit", parents=[common], help="matrix round-trip suite")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--theta", required=True, help="comma-separated cuts")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=_cmd_pgl_orbit)

    p = sub.add_parser("catalog-check", parents=[common], help="audit catalog entries")
    p.add_argument("--entry", default="all", help="entry name, or 'all'")
    p.set_defaults(func=_cmd_catalog_check)

    return parser


def run(argv=None) -> int:
    """Parse arguments, run one subcommand, emit its report; returns exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        report = args.func(args)
    except UsageError as exc:
        print(f"spherica: {exc}", file=sys.stderr)
        return 2
    except PadicError as exc:
        print(f"spherica: {exc}", file=sys.stderr)
        return 2
    report.elapsed_seconds = time.perf_counter() - start
    text = report.render(args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if report.passed else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
