"""Command-line front end.

Three subcommands:

  invariants    exact surface invariants for one (d, p, level, index)
  local-models  the mod-p local structure at and around a superspecial point
  report        a grid of surface invariants over lists of d and p

Exit codes: 0 all checks pass, 1 a mathematical identity failed,
2 a hypothesis was violated, 3 a resource guard refused the computation.
Exact rationals serialize as {"num": ..., "den": ...} decimal strings.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction
from math import gcd

from . import curves, dieudonne, intersect, lfunc
from .arith import is_prime, kronecker_symbol, squarefree_part_check
from .errors import GuardError, HypothesisError, IdentityCheckError

EXIT_OK = 0
EXIT_IDENTITY = 1
EXIT_HYPOTHESIS = 2
EXIT_GUARD = 3


def discriminant_of(d: int) -> int:
    return d if d % 4 == 1 else 4 * d


class RunConfig:
    """Validated command inputs; inertness is enforced before any computation."""

    def __init__(self, d, p, level=3, index=None, truncation=None, series_terms=10**5,
                 fmt="plain", out=None, reproducible=False, enforce_level_coprime=True):
        squarefree_part_check(d)
        if not is_prime(p):
            raise HypothesisError(f"p = {p} is not prime")
        self.d = d
        self.D = discriminant_of(d)
        kron = kronecker_symbol(self.D, p)
        if kron == 0:
            raise HypothesisError(f"p = {p} is ramified in Q(sqrt({d}))")
        if kron == 1:
            raise HypothesisError(f"p = {p} splits in Q(sqrt({d}))")
        if level < 1 or level == 2:
            raise HypothesisError("level must be 1 or at least 3")
        if enforce_level_coprime and gcd(p, 2 * level) != 1:
            raise HypothesisError(f"p = {p} is not relatively prime to 2N = {2 * level}")
        self.p = p
        self.level = level
        self.index = Fraction(index) if index is not None else None
        self.truncation = truncation
        self.series_terms = series_terms
        self.fmt = fmt
        self.out = out
        self.reproducible = reproducible

    def resolve_index(self) -> Fraction:
        if self.index is not None:
            return self.index
        try:
            return Fraction(lfunc.index_gamma(self.level, self.D))
        except HypothesisError as exc:
            raise HypothesisError(
                f"no index formula for level N = {self.level}: {exc}; pass --index explicitly"
            ) from exc

    def as_dict(self) -> dict:
        return {
            "d": self.d,
            "D": self.D,
            "p": self.p,
            "level": self.level,
            "index": encode_value(self.index) if self.index is not None else None,
            "truncation": self.truncation,
            "series_terms": self.series_terms,
        }


# --- payload encoding ----------------------------------------------------------


def encode_value(x):
    if isinstance(x, Fraction):
        return {"num": str(x.numerator), "den": str(x.denominator)}
    if isinstance(x, bool) or isinstance(x, int) or x is None:
        return x
    if isinstance(x, float):
        return x
    return str(x)


def encode_payload(obj):
    if isinstance(obj, dict):
        return {k: encode_payload(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode_payload(v) for v in obj]
    return encode_value(obj)


def decode_payload(obj):
    """Inverse of encode_payload on rationals; everything else passes through."""
    if isinstance(obj, dict):
        if set(obj) == {"num", "den"}:
            return Fraction(int(obj["num"]), int(obj["den"]))
        return {k: decode_payload(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [decode_payload(v) for v in obj]
    return obj


def check_row(name, lhs, rhs) -> dict:
    return {"name": name, "lhs": _exact_str(lhs), "rhs": _exact_str(rhs), "pass": _exact_str(lhs) == _exact_str(rhs)}


def _exact_str(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    return str(x)


# --- subcommand: invariants -----------------------------------------------------


def run_invariants(cfg: RunConfig) -> dict:
    index = cfg.resolve_index()
    inv = lfunc.component_count(cfg.D, index, cfg.p, cfg.level)
    report = intersect.full_report(cfg.p, inv.n, D=cfg.D, index=index) if inv.n >= 1 else None
    points, method = curves.count_points_info(cfg.p)

    checks = [
        check_row("c2_equals_3n", inv.c2, 3 * inv.n),
        check_row("n_ssp_incidence", inv.n_ssp * (cfg.p + 1), inv.n * (cfg.p**3 + 1)),
        check_row("fermat_count", points, cfg.p**3 + 1),
    ]
    results = {
        "index": index,
        "c2": inv.c2,
        "n": inv.n,
        "n_is_integer": inv.n.denominator == 1,
        "n_ssp": inv.n_ssp,
        "g_a": inv.g_a,
        "fermat_points": points,
        "fermat_point_method": method,
    }
    if report is not None:
        results.update(
            {
                "zi_zi": report.zi_zi,
                "z_z": report.z_z,
                "deg_l_on_component": report.deg_l,
                "c1_sq": report.c1_sq,
            }
        )
        for name, lhs, rhs, _ in report.identities:
            checks.append(check_row(name, lhs, rhs))
    checks.append(
        check_row(
            "functional_equation_1e-8",
            abs(lfunc.chern_c2_analytic(cfg.D, index, cfg.series_terms) - float(inv.c2)) < 1e-8,
            True,
        )
    )
    return {"config": cfg.as_dict(), "results": results, "checks": checks}


# --- subcommand: local-models ----------------------------------------------------


def run_local_models(cfg: RunConfig) -> dict:
    p, D = cfg.p, cfg.D
    if p > curves.ENUMERATION_GUARD:
        raise GuardError(f"p = {p} exceeds the local-model guard {curves.ENUMERATION_GUARD}")
    T = cfg.truncation or dieudonne.default_truncation(p)

    ssp = dieudonne.ssp_display(p, D, T)
    cov = dieudonne.ssp_covariant_display(p, D, T)
    gss = dieudonne.gss_deformation(p, D)

    h_ssp = dieudonne.hasse_invariant(ssp)
    h_gss = dieudonne.hasse_invariant(gss)
    ring = ssp.ring
    expected_h = ring.monomial(p + 1, 0) + ring.monomial(0, p + 1)
    lie = dieudonne.frobenius_square_lie(cov)
    expected_lie = [
        [expected_h, ring.zero(), ring.zero()],
        [ring.zero(), ring.monomial(p + 1, 0), ring.monomial(1, p)],
        [ring.zero(), ring.monomial(p, 1), ring.monomial(0, p + 1)],
    ]
    branches = dieudonne.all_branches(p, D, T)
    lines = [b.limit_line for b in branches]
    distinct = len({tuple(line) for line in lines}) == len(lines)
    hssp_orders = sorted({b.hssp_order for b in branches})
    gluing = dieudonne.gluing_obstruction(p, D)

    from .ffield import quotient_dimension, vanishing_scheme_ideal, SeriesRing

    dim = quotient_dimension(vanishing_scheme_ideal(ring))
    ring_plus = SeriesRing(ring.field, ring.trunc + 4)
    dim_plus = quotient_dimension(vanishing_scheme_ideal(ring_plus))

    checks = [
        check_row("hasse_ssp_equals_local_model", h_ssp.coeff.text(), expected_h.text()),
        check_row("hasse_weight", h_ssp.weight, p * p - 1),
        check_row("hasse_gss_is_minus_u", h_gss.coeff.text(), (-gss.ring.u()).text()),
        check_row("hasse_gss_order", dieudonne.order_at_origin(h_gss.coeff), 1),
        check_row(
            "frobenius_square_lie_matrix",
            [[x.text() for x in row] for row in lie],
            [[x.text() for x in row] for row in expected_lie],
        ),
        check_row("sigma_block_nilpotent", dieudonne.sigma_block_nilpotent(p, D), True),
        check_row("branch_count", len(branches), p + 1),
        check_row("limit_lines_distinct", distinct, True),
        check_row("hssp_order_each_branch", hssp_orders, [p * p - 1]),
        check_row("gluing_obstruction", gluing, True),
        check_row("vanishing_scheme_dimension_stable", dim, dim_plus),
    ]
    branch_table = [
        {
            "zeta": repr(b.zeta),
            "limit_line": [repr(c) for c in b.limit_line],
            "htilde": b.htilde_coeff.text(),
            "hssp": b.hssp_coeff.text(),
            "hssp_order": b.hssp_order,
        }
        for b in branches
    ]
    results = {
        "hasse_ssp": h_ssp.coeff.text(),
        "hasse_weight": h_ssp.weight,
        "hasse_gss": h_gss.coeff.text(),
        "frobenius_square_lie": [[x.text() for x in row] for row in lie],
        "branches": branch_table,
        "vanishing_scheme_dimension": dim,
        "truncation": T,
    }
    return {"config": cfg.as_dict(), "results": results, "checks": checks}


# --- subcommand: report -----------------------------------------------------------


def run_report(d_list, p_list, level, index, series_terms) -> dict:
    rows = []
    pairs = sorted(
        ((d, p) for d in d_list for p in p_list),
        key=lambda t: (abs(discriminant_of(t[0])), t[1]),
    )
    for d, p in pairs:
        row = {"d": d, "D": discriminant_of(d), "p": p, "level": level}
        try:
            cfg = RunConfig(d, p, level=level, index=index, series_terms=series_terms)
            idx = cfg.resolve_index()
            inv = lfunc.component_count(cfg.D, idx, p, level)
            row.update(
                {
                    "index": idx,
                    "c2": inv.c2,
                    "n": inv.n,
                    "n_ssp": inv.n_ssp,
                    "g_a": inv.g_a,
                    "status": "ok",
                }
            )
        except HypothesisError as exc:
            row.update({"status": f"skipped: {exc}"})
        rows.append(row)
    return {"config": {"level": level, "series_terms": series_terms}, "rows": rows}


# --- output ------------------------------------------------------------------------


def render(payload: dict, fmt: str, reproducible: bool) -> str:
    if not reproducible:
        payload = dict(payload)
        payload["generated_at"] = time.strftime("%Y-%m-%dT%H:%M:%S")
    if fmt == "json":
        return json.dumps(encode_payload(payload), indent=2) + "\n"
    if fmt == "csv":
        return render_csv(payload)
    return render_plain(payload)


def render_plain(payload: dict) -> str:
    lines = []
    stamp = payload.get("generated_at")
    if stamp:
        lines.append(f"# generated: {stamp}")
    if "rows" in payload:
        for row in payload["rows"]:
            cells = [f"{k}={_exact_str(v)}" for k, v in row.items()]
            lines.append("  ".join(cells))
    else:
        lines.append("config: " + json.dumps(encode_payload(payload.get("config", {}))))
        for k, v in payload.get("results", {}).items():
            lines.append(f"{k} = {_render_plain_value(v)}")
        for c in payload.get("checks", []):
            status = "pass" if c["pass"] else "FAIL"
            lines.append(f"[{status}] {c['name']}: {c['lhs']} == {c['rhs']}")
    return "\n".join(lines) + "\n"


def _render_plain_value(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, list):
        return json.dumps(encode_payload(v))
    return str(v)


def render_csv(payload: dict) -> str:
    buf = io.StringIO()
    if "rows" in payload:
        fields = ["d", "D", "p", "level", "index", "c2", "n", "n_ssp", "g_a", "status"]
        writer = csv.DictWriter(buf, fieldnames=fields)
        writer.writeheader()
        for row in payload["rows"]:
            writer.writerow({k: _exact_str(row.get(k, "")) for k in fields})
    else:
        results = payload.get("results", {})
        cfg = payload.get("config", {})
        fields = list(cfg.keys()) + list(results.keys()) + ["all_checks_pass"]
        writer = csv.DictWriter(buf, fieldnames=fields)
        writer.writeheader()
        row = {k: _exact_str(decode_payload(v) if isinstance(v, dict) else v) for k, v in cfg.items()}
        for k, v in results.items():
            row[k] = _exact_str(v) if not isinstance(v, list) else json.dumps(encode_payload(v))
        row["all_checks_pass"] = str(all(c["pass"] for c in payload.get("checks", [])))
        writer.writerow(row)
    return buf.getvalue()


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- argument parsing ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="picardss",
        description="Exact invariants of the supersingular locus of a Picard modular surface",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, multi=False):
        if multi:
            sp.add_argument("--d", required=True, help="comma-separated negative squarefree d values")
            sp.add_argument("--p", required=True, help="comma-separated primes")
        else:
            sp.add_argument("--d", type=int, required=True, help="negative squarefree field generator")
            sp.add_argument("--p", type=int, required=True, help="inert prime")
        sp.add_argument("--level", type=int, default=3, help="tame level N (default 3)")
        sp.add_argument("--index", default=None, help="arithmetic index override, e.g. 32 or 3/2")
        sp.add_argument("--truncation", type=int, default=None, help="series truncation order")
        sp.add_argument("--series-terms", type=int, default=10**5, dest="series_terms")
        sp.add_argument("--format", choices=["plain", "json", "csv"], default="plain", dest="fmt")
        sp.add_argument("--out", default=None, help="output path (default stdout)")
        sp.add_argument("--reproducible", action="store_true", help="suppress the timestamp header")

    add_common(sub.add_parser("invariants", help="surface invariants and cross-checks"))
    add_common(sub.add_parser("local-models", help="superspecial local structure"))
    add_common(sub.add_parser("report", help="grid of invariants"), multi=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "invariants":
            cfg = RunConfig(args.d, args.p, args.level, args.index, args.truncation,
                            args.series_terms, args.fmt, args.out, args.reproducible)
            payload = run_invariants(cfg)
        elif args.command == "local-models":
            # level plays no role in the local analysis, so only inertness gates here
            cfg = RunConfig(args.d, args.p, args.level, args.index, args.truncation,
                            args.series_terms, args.fmt, args.out, args.reproducible,
                            enforce_level_coprime=False)
            payload = run_local_models(cfg)
        else:
            d_list = [int(x) for x in str(args.d).split(",")]
            p_list = [int(x) for x in str(args.p).split(",")]
            payload = run_report(d_list, p_list, args.level,
                                 args.index, args.series_terms)
    except HypothesisError as exc:
        print(f"hypothesis violated: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except GuardError as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except IdentityCheckError as exc:
        print(f"identity failed: {exc}", file=sys.stderr)
        return EXIT_IDENTITY

    _emit(render(payload, args.fmt, args.reproducible), args.out)
    if "checks" in payload and not all(c["pass"] for c in payload["checks"]):
        return EXIT_IDENTITY
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
