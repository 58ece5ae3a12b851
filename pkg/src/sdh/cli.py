"""Command-line front end: ``sdh <command> ...``.

Exit codes: 0 success or verified, 2 input error, 3 verification failed,
4 computation aborted (caps, complex checks, enumeration budget).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import datasets
from .algebra import core_poly, exp_of_count_series, series_of_rational
from .dimension import compare_even_odd, even_odd_sums, signed_dimension_group, verify_shift_equivalence
from .dynamics import signed_counts
from .errors import CapExceeded, ComputationAborted, DegeneratePeriod, InputError, NonIntegralTrace, OrbitBudgetExceeded
from .putnam import homology, lefschetz_check
from .zeta import check_corollary, zeta_from_homology, zeta_hom_manifold, zeta_sft

EXIT_OK, EXIT_INPUT, EXIT_FAILED, EXIT_ABORTED = 0, 2, 3, 4


class Report:
    """A command result: text lines, a JSON object and an exit code."""

    def __init__(self, data: dict, lines: list[str], code: int = EXIT_OK):
        self.data, self.lines, self.code = data, lines, code

    def render(self, as_json: bool) -> str:
        if as_json:
            return json.dumps(self.data, indent=2) + "\n"
        return "\n".join(self.lines) + "\n"


def _expect(ds: datasets.Dataset, kind: str):
    if ds.kind != kind:
        raise InputError(f"{ds.name}: expected {kind} data, got {ds.kind}")
    return ds.payload


def _verdict(ok: bool) -> str:
    return "ok" if ok else "MISMATCH"


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_zeta(ref: str, order: int = 8, signed: bool = True) -> Report:
    if order < 1:
        raise InputError("--order must be >= 1")
    ds = datasets.load(ref)
    graph = _expect(ds, "graph")
    if not signed:
        graph = graph.with_signs(1)
    f = zeta_sft(graph)
    series = series_of_rational(f, order)
    counts = signed_counts(graph, order)
    ok = exp_of_count_series(counts, order) == series
    data = {
        "command": "zeta",
        "source": ds.name,
        "signed": signed,
        "order": order,
        "function": f.to_json(),
        "display": str(f),
        "series": series.to_json(),
        "counts": counts,
        "verified": ok,
    }
    lines = [
        f"source: {ds.name} ({'signed' if signed else 'unsigned'})",
        f"zeta(z) = {f}",
        f"series to z^{order}: " + ", ".join(str(c) for c in series.coeffs),
        "periodic counts: " + ", ".join(str(c) for c in counts),
        f"series check: {_verdict(ok)}",
    ]
    return Report(data, lines, EXIT_OK if ok else EXIT_FAILED)


def cmd_dimgroup(ref: str, block: int = 0) -> Report:
    if block < 0:
        raise InputError("--block must be >= 0")
    ds = datasets.load(ref)
    graph = _expect(ds, "graph")
    dg = signed_dimension_group(graph, block, source=ds.name)
    data = {"command": "dimgroup", **dg.to_json()}
    lines = [f"source: {ds.name}, paths of length {block}", "transfer matrix:"]
    lines += ["  " + " ".join(f"{x:>3}" for x in row) for row in dg.transfer.tolist()]
    lines += [
        f"rational dimension: {dg.dimension}",
        f"core polynomial: {dg.core_polynomial}",
        f"Bowen-Franks divisors: {list(dg.bowen_franks)}",
    ]
    return Report(data, lines)


def _homology_parts(ds: datasets.Dataset):
    p = _expect(ds, "pair")
    h = homology(p)
    degrees = {
        str(N): {"dimension": d, "action": a.to_json(), "core_polynomial": core_poly(a).to_json()}
        for N, (d, a) in sorted(h.degrees.items())
    }
    data = {
        "source": ds.name,
        "k": p.k,
        "caps": [p.L_max, p.M_max],
        "chain_dims": {f"{L},{M}": d for (L, M), d in sorted(h.chain_dims.items())},
        "degrees": degrees,
    }
    lines = [f"pair: {ds.name} (k = {p.k}, caps L <= {p.L_max}, M <= {p.M_max})", "chain group dimensions:"]
    lines += [f"  (L, M) = ({L}, {M}): {d}" for (L, M), d in sorted(h.chain_dims.items())]
    if h.degrees:
        lines.append("homology:")
        lines += [f"  degree {N:>2}: dimension {d}, core polynomial {core_poly(a)}" for N, (d, a) in sorted(h.degrees.items())]
    else:
        lines.append("homology: zero in every degree")
    return p, h, data, lines


def cmd_homology(ref: str) -> Report:
    _, _, data, lines = _homology_parts(datasets.load(ref))
    return Report({"command": "homology", **data}, lines)


def cmd_lefschetz(ref: str, n_max: int = 6) -> Report:
    if n_max < 1:
        raise InputError("--n-max must be >= 1")
    p, h, data, lines = _homology_parts(datasets.load(ref))
    rows = [lefschetz_check(p, n, h) for n in range(1, n_max + 1)]
    ok = all(r.equal for r in rows)
    data = {
        "command": "lefschetz",
        **data,
        "rows": [{"n": r.n, "lhs": r.lhs, "rhs": r.rhs, "equal": r.equal} for r in rows],
        "all_equal": ok,
    }
    lines += ["   n  traces  periodic  equal"]
    lines += [f"{r.n:>4}  {r.lhs:>6}  {r.rhs:>8}  {'yes' if r.equal else 'NO'}" for r in rows]
    lines.append(f"Lefschetz identity: {_verdict(ok)}")
    return Report(data, lines, EXIT_OK if ok else EXIT_FAILED)


def cmd_verify_se(ref: str) -> Report:
    ds = datasets.load(ref)
    cert = _expect(ds, "certificate")
    ok = verify_shift_equivalence(cert)
    pa, pb = core_poly(cert.A), core_poly(cert.B)
    data = {
        "command": "verify-se",
        "source": ds.name,
        "lag": cert.lag,
        "verified": ok,
        "core_polynomials": {"A": pa.to_json(), "B": pb.to_json()},
    }
    lines = [
        f"certificate: {ds.name} (lag {cert.lag})",
        f"core polynomial of A: {pa}",
        f"core polynomial of B: {pb}",
        f"shift equivalence: {'verified' if ok else 'REJECTED'}",
    ]
    return Report(data, lines, EXIT_OK if ok else EXIT_FAILED)


def _action_data(refs: list[str], q_parity: str | None):
    if len(refs) == 1:
        ds = datasets.load(refs[0])
        acts = _expect(ds, "actions")
        hom, man, parity, name = acts.homology, acts.manifold, acts.q_parity, ds.name
    elif len(refs) == 2:
        # two files: bare degree -> matrix maps for the signed homology and the manifold
        (h_obj, h_name), (m_obj, m_name) = datasets.read_json(refs[0]), datasets.read_json(refs[1])
        try:
            hom, man = datasets.load_actions(h_obj), datasets.load_actions(m_obj)
        except (TypeError, ValueError, AttributeError) as exc:
            raise InputError(f"malformed action map: {exc}") from exc
        parity, name = None, f"{h_name} + {m_name}"
    else:
        raise InputError("expected one combined action file or two action maps")
    parity = q_parity or parity
    if parity not in ("even", "odd"):
        raise InputError("the parity of q is unknown; pass --q-parity even|odd")
    return hom, man, parity, name


def cmd_compare(refs: list[str], q_parity: str | None = None) -> Report:
    hom, man, parity, name = _action_data(refs, q_parity)
    left, right = even_odd_sums(parity, hom, man)
    pl, pr = core_poly(left), core_poly(right)
    ok = compare_even_odd(parity, hom, man)
    data = {
        "command": "compare-spectra",
        "source": name,
        "q_parity": parity,
        "left_core_polynomial": pl.to_json(),
        "right_core_polynomial": pr.to_json(),
        "equal": ok,
    }
    lines = [
        f"actions: {name}, q {parity}",
        f"first direct sum core polynomial: {pl}",
        f"second direct sum core polynomial: {pr}",
        f"same nonzero spectrum: {'yes' if ok else 'NO'}",
    ]
    return Report(data, lines, EXIT_OK if ok else EXIT_FAILED)


def cmd_corollary(refs: list[str], q_parity: str | None = None) -> Report:
    hom, man, parity, name = _action_data(refs, q_parity)
    z_man = zeta_hom_manifold(man)
    z_sig = zeta_from_homology(hom)
    ok = check_corollary(parity, z_man, z_sig)
    relation = "equal" if parity == "even" else "reciprocal"
    data = {
        "command": "corollary",
        "source": name,
        "q_parity": parity,
        "zeta_manifold": z_man.to_json(),
        "zeta_signed": z_sig.to_json(),
        "relation": relation,
        "holds": ok,
    }
    lines = [
        f"actions: {name}, q {parity}",
        f"zeta from manifold homology: {z_man}",
        f"zeta from signed homology:   {z_sig}",
        f"expected relation: {relation}; holds: {'yes' if ok else 'NO'}",
    ]
    return Report(data, lines, EXIT_OK if ok else EXIT_FAILED)


def cmd_examples_list() -> Report:
    entries = []
    for name in datasets.bundled_names():
        ds = datasets.load_bundled(name)
        entries.append({"name": name, "kind": ds.kind, "description": ds.description})
    width = max(len(e["name"]) for e in entries)
    lines = [f"{e['name']:<{width}}  {e['kind']:<11}  {e['description']}" for e in entries]
    return Report({"command": "examples list", "datasets": entries}, lines)


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sdh", description="Invariants of signed shifts of finite type.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        return sp

    sp = add("zeta", "signed zeta function of a graph, checked against periodic counts")
    sp.add_argument("input")
    sp.add_argument("--order", type=int, default=8)
    group = sp.add_mutually_exclusive_group()
    group.add_argument("--signed", dest="signed", action="store_true", default=True)
    group.add_argument("--unsigned", dest="signed", action="store_false")

    sp = add("dimgroup", "rational signed dimension group and Bowen-Franks divisors")
    sp.add_argument("input")
    sp.add_argument("--block", type=int, default=0, help="length of the paths the transfer acts on")

    sp = add("homology", "signed homology of a pair presentation")
    sp.add_argument("input")

    sp = add("lefschetz", "compare homological traces with signed periodic counts")
    sp.add_argument("input")
    sp.add_argument("--n-max", type=int, default=6)

    sp = add("verify-se", "check a shift-equivalence certificate")
    sp.add_argument("input")

    for name, text in (
        ("compare-spectra", "compare nonzero spectra of the even/odd direct sums"),
        ("corollary", "compare the zeta functions of signed and manifold homology"),
    ):
        sp = add(name, text)
        sp.add_argument("inputs", nargs="+", help="a dataset with both action maps, or two action-map files")
        sp.add_argument("--q-parity", choices=("even", "odd"))

    sp = sub.add_parser("examples", help="bundled datasets")
    esub = sp.add_subparsers(dest="action", required=True)
    lp = esub.add_parser("list", help="list bundled datasets")
    lp.add_argument("--json", action="store_true", help="machine-readable output")
    return parser


def run(args: argparse.Namespace) -> Report:
    c = args.command
    if c == "zeta":
        return cmd_zeta(args.input, args.order, args.signed)
    if c == "dimgroup":
        return cmd_dimgroup(args.input, args.block)
    if c == "homology":
        return cmd_homology(args.input)
    if c == "lefschetz":
        return cmd_lefschetz(args.input, args.n_max)
    if c == "verify-se":
        return cmd_verify_se(args.input)
    if c == "compare-spectra":
        return cmd_compare(args.inputs, args.q_parity)
    if c == "corollary":
        return cmd_corollary(args.inputs, args.q_parity)
    return cmd_examples_list()


def _hint(exc: Exception) -> str:
    if isinstance(exc, CapExceeded):
        return "hint: raise Lmax/Mmax in the pair file"
    if isinstance(exc, OrbitBudgetExceeded):
        return "hint: lower the order or raise SDH_ORBIT_BUDGET"
    if isinstance(exc, ComputationAborted):
        return "hint: re-run with a larger block level k"
    return ""


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        report = run(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ComputationAborted, OrbitBudgetExceeded, NonIntegralTrace, DegeneratePeriod) as exc:
        print(f"aborted: {type(exc).__name__}: {exc}", file=sys.stderr)
        hint = _hint(exc)
        if hint:
            print(hint, file=sys.stderr)
        return EXIT_ABORTED
    sys.stdout.write(report.render(args.json))
    return report.code


if __name__ == "__main__":
    sys.exit(main())
