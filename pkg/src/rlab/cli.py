"""``rlab`` command line: build, verify and export graphs, complexes and reports as JSON.

Exit codes: 0 success with all checks passing, 1 a check failed, 2 usage or
input error, 3 a resource cap was hit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3
SIG_DIGITS = 12


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- JSON plumbing


def _clean(x):
    """Make values JSON-stable: round floats, stringify fractions, unwrap numpy scalars."""
    import numpy as np

    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if x != x or x in (float("inf"), float("-inf")):
            return str(x)
        r = float(f"{x:.{SIG_DIGITS}g}")
        return 0.0 if r == 0 else r
    if isinstance(x, complex):
        return [_clean(x.real), _clean(x.imag)]
    return x


def dumps(doc) -> str:
    return json.dumps(_clean(doc), sort_keys=True, indent=1) + "\n"


def write_doc(doc, path: str | None):
    text = dumps(doc)
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def read_doc(path: str) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("schema_version") != SCHEMA_VERSION:
        raise UsageError(f"{path}: missing or unsupported schema_version")
    return doc


def exact(value):
    return {"value": value, "tolerance": "exact"}


def approx(value, tol):
    return {"value": value, "tolerance": tol}


def graph_doc(graph, metadata: dict) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "graph",
        "n": graph.n,
        "edges": graph.edges,
        "metadata": metadata,
    }


def complex_doc(X, colors=None, arcs=None, provenance=None) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": "complex",
        "n_vertices": X.n,
        "faces": {str(i): X.faces(i) for i in range(1, X.dim + 1)},
        "provenance": provenance or {},
    }
    if colors is not None:
        doc["vertex_colors"] = colors
    if arcs is not None:
        doc["arcs"] = arcs
    return doc


def load_graph(doc: dict):
    from .graph import Graph

    if doc.get("kind") != "graph":
        raise UsageError("expected a graph document")
    return Graph(int(doc["n"]), doc["edges"])


def load_complex(doc: dict):
    """A SimplicialComplex from a complex document, or the 1-dimensional complex of a graph document."""
    from .complex import SimplicialComplex

    if doc.get("kind") == "graph":
        return SimplicialComplex.from_graph(load_graph(doc))
    if doc.get("kind") != "complex":
        raise UsageError("expected a complex or graph document")
    faces = []
    for i, fs in doc["faces"].items():
        faces.extend(tuple(f) for f in fs)
    return SimplicialComplex(faces, n_vertices=int(doc["n_vertices"]))


def report(operation: str, parameters: dict, results: dict, passed: bool, seeds=None, tolerances=None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "report",
        "operation": operation,
        "parameters": parameters,
        "results": results,
        "seeds": seeds or {},
        "tolerances": tolerances or {},
        "passed": passed,
    }


def parse_poly(text: str) -> list[int]:
    """Coefficients, little-endian in degree: '1,1,1' or '[1,1,1]' is y^2+y+1."""
    try:
        vals = json.loads(text) if text.strip().startswith("[") else [int(t) for t in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"bad polynomial {text!r}; expected little-endian coefficients like 1,1,1") from exc
    if not vals or not all(isinstance(v, int) for v in vals):
        raise UsageError(f"bad polynomial {text!r}")
    return vals


# ---------------------------------------------------------------- subcommands


def cmd_lps(args) -> int:
    from .lps import lps_graph

    G = lps_graph(args.p, args.q)
    meta = {"p": G.p, "q": G.q, "regular_degree": G.degree, "bipartite": G.bipartite, "group": G.group_type}
    if args.out:
        write_doc(graph_doc(G.graph, meta), args.out)
    results = {
        "vertices": exact(G.n),
        "regular_degree": exact(G.degree),
        "bipartite": G.bipartite,
        "connected": True,
        "group": G.group_type,
    }
    write_doc(report("lps", {"p": args.p, "q": args.q}, results, True), None)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    from .spectra import RAMANUJAN_TOL, graph_spectrum, is_ramanujan_graph

    g = load_graph(read_doc(args.graph))
    results = {}
    passed = True
    if args.ramanujan:
        v = is_ramanujan_graph(g, tol=args.tol, mode=args.mode, seed=args.seed)
        passed = v.ramanujan
        results.update(
            ramanujan="yes" if v.ramanujan else "no",
            degree=exact(v.k),
            bipartite=v.bipartite,
            bound=approx(v.bound, "exact formula 2*sqrt(k-1)"),
            max_nontrivial=approx(v.max_nontrivial, v.tol),
            residual=approx(v.residual, "eigensolver residual"),
            mode=v.mode,
        )
    else:
        rep = graph_spectrum(g)
        results.update(
            eigenvalues=approx(rep.eigenvalues, rep.residual_bound),
            residual=approx(rep.residual, rep.residual_bound),
            tags=rep.tags,
        )
    write_doc(report("spectrum", {"graph": os.path.basename(args.graph), "mode": args.mode}, results, passed,
                     seeds={"eigensolver": args.seed}, tolerances={"ramanujan": args.tol if args.ramanujan else RAMANUJAN_TOL}), None)
    return EXIT_OK if passed else EXIT_FAIL


def cmd_ball(args) -> int:
    from .building import building_ball

    B = building_ball(args.d, args.q, args.r)
    results = {"vertices": exact(B.n), "sphere_sizes": exact(B.sphere_sizes())}
    if B.r >= 1:
        link = B.link(0)
        results["link"] = {"vertices": exact(link.n), "edges": exact(link.m)}
    if args.out:
        arcs = [[int(a), int(b), int(c)] for (a, b), c in zip(B.arcs, B.arc_colors)]
        prov = {"construction": "building_ball", "d": args.d, "q": args.q, "r": args.r}
        write_doc(complex_doc(B.complex(), colors=B.colors, arcs=arcs, provenance=prov), args.out)
    summary = f"{B.n} vertices"
    if "link" in results:
        summary += f", link {results['link']['vertices']['value']}/{results['link']['edges']['value']}"
    results["summary"] = summary
    write_doc(report("ball", {"d": args.d, "q": args.q, "r": args.r}, results, True), None)
    return EXIT_OK


def cmd_cs(args) -> int:
    import numpy as np

    from .algebra import Poly, field_of_order
    from .cartwright_steger import cs_complex
    from .complex import clique_complex

    coeffs = parse_poly(args.ideal)
    F = field_of_order(args.q)
    g = Poly.from_ints(F, coeffs) if F.base is None else Poly(F, coeffs)
    cx = cs_complex(args.d, args.q, g)
    max_dim = args.d - 1 if args.max_dim is None else args.max_dim
    results = {
        "vertices": exact(cx.n),
        "degree": exact(cx.degree),
        "sigma_sizes": exact([len(S) for S in cx.sigma]),
        "group": cx.group_type,
        "det_index": exact(cx.det_index),
        "partite": exact(cx.partite),
        "field_order": exact(cx.q**cx.e),
        "theorem_guaranteed": cx.theorem_guaranteed,
    }
    if args.out:
        X = clique_complex(cx.graph, max_dim)
        results["f_vector"] = exact(X.f_vector())
        gens = cx.neighbors.shape[1]
        arcs = np.stack([np.repeat(np.arange(cx.n), gens), cx.neighbors.ravel(), np.tile(cx.generator_colors, cx.n)], axis=1)
        prov = {
            "construction": "cartwright_steger",
            "d": args.d,
            "q": args.q,
            "ideal": list(cx.g.coeffs),
            "group": cx.group_type,
            "partite": cx.partite,
            "theorem_guaranteed": cx.theorem_guaranteed,
        }
        write_doc(complex_doc(X, colors=cx.colors, arcs=arcs, provenance=prov), args.out)
    params = {"d": args.d, "q": args.q, "ideal": coeffs, "max_dim": max_dim}
    write_doc(report("cs", params, results, True), None)
    return EXIT_OK


def cmd_hecke(args) -> int:
    import numpy as np

    from .building import hecke_from_arcs
    from .cartwright_steger import hecke_verdict
    from .spectra import check_hecke_family

    doc = read_doc(args.complex)
    prov = doc.get("provenance", {})
    if "arcs" not in doc or "vertex_colors" not in doc or "d" not in prov or "q" not in prov:
        raise UsageError("hecke needs a colored complex document with arcs (from `cs` or `ball`)")
    d, q = int(prov["d"]), int(prov["q"])
    n = int(doc["n_vertices"])
    arcs = np.asarray(doc["arcs"], dtype=np.int64).reshape(-1, 3)
    hecke = hecke_from_arcs(n, arcs[:, :2], arcs[:, 2], d)
    check_hecke_family(hecke)
    colors = np.asarray(doc["vertex_colors"], dtype=np.int64)
    partite = int(prov.get("partite", d))
    v = hecke_verdict(hecke, colors % partite, partite, d, q, args.mode, args.tol, args.seed,
                      bool(prov.get("theorem_guaranteed", False)))
    results = {
        "mode": v.mode,
        "theorem_guaranteed": v.theorem_guaranteed,
        "trivial_residual": approx(v.trivial_residual, 1e-9),
        "residual": approx(v.residual, "eigensolver residual"),
    }
    if v.mode == "full":
        results["ramanujan"] = "yes" if v.ramanujan else "no"
        results["class_counts"] = {c: exact(v.classes.count(c)) for c in sorted(set(v.classes))}
        results["offending"] = exact(len(v.offending))
    else:
        results["necessary_condition"] = "pass" if v.ramanujan else "fail"
        results["spectral_radius"] = approx(v.spectral_radius, args.tol)
        results["extremes"] = approx(list(v.extremes), args.tol)
        results["bound"] = approx(v.bound, "exact formula")
        results["verdict_kind"] = "theorem-guaranteed" if v.theorem_guaranteed else "empirical, not theorem-guaranteed"
    params = {"complex": os.path.basename(args.complex), "mode": args.mode, "d": d, "q": q}
    write_doc(report("hecke", params, results, v.ramanujan, seeds={"eigensolver": args.seed},
                     tolerances={"circle": args.tol}), None)
    return EXIT_OK if v.ramanujan else EXIT_FAIL


def cmd_expand(args) -> int:
    from . import expansion
    from .spectra import spectral_gap

    X = load_complex(read_doc(args.complex))
    i = args.dim
    passed = True
    seeds = {}
    if args.metric == "cheeger":
        if X.dim == 1:
            from .graph import Graph

            h, hbar = expansion.cheeger_graph(Graph(X.n, X.faces(1)))
            results = {"h": exact(h.value), "h_bar": exact(hbar.value), "witness": exact(h.parts)}
        else:
            h = expansion.cheeger_highdim(X)
            results = {"h": exact(h.value), "witness": exact(h.parts)}
        try:
            rep = expansion.validate_cheeger_inequalities(X)
        except Exception as exc:  # inequality needs regularity / complete skeleton
            results["inequality"] = f"not applicable: {exc}"
        else:
            passed = rep.passed
            results["inequality"] = {
                "lower": approx(rep.lower, expansion.CHECK_TOL),
                "middle": approx(rep.middle, expansion.CHECK_TOL),
                "upper": approx(rep.upper, expansion.CHECK_TOL),
                "passed": rep.passed,
            }
    elif args.metric == "coboundary":
        r = expansion.coboundary_expansion(X, i)
        results = {
            "E": exact(r.E),
            "E_normalized": exact(r.E_normalized),
            "cohomology_vanishes": r.cohomology_vanishes,
            "witness_support": exact(r.witness.f) if r.witness else None,
        }
    elif args.metric == "filling":
        r = expansion.filling(X, i)
        results = {"nu": exact(r.nu), "witness_support": exact(r.witness.f) if r.witness else None}
    elif args.metric == "gap":
        results = {"spectral_gap": approx(spectral_gap(X, i), 1e-9)}
    else:
        seeds = {"mixing": args.seed}
        r = expansion.validate_mixing(X, trials=args.trials, seed=args.seed)
        passed = r.passed
        results = {
            "mu0": approx(r.mu0, 1e-9),
            "k": approx(r.k, 1e-12),
            "trials": exact(r.trials),
            "failures": exact(len(r.failures)),
            "max_slack_ratio": approx(r.max_slack_ratio, expansion.CHECK_TOL),
        }
    params = {"complex": os.path.basename(args.complex), "metric": args.metric, "dim": i}
    write_doc(report("expand", params, results, passed, seeds=seeds), None)
    return EXIT_OK if passed else EXIT_FAIL


def cmd_overlap(args) -> int:
    from .expansion import overlap_estimate

    X = load_complex(read_doc(args.complex))
    r = overlap_estimate(X, trials=args.trials, seed=args.seed)
    results = {"upper_bound": exact(r.upper_bound), "depths": exact(r.depths)}
    params = {"complex": os.path.basename(args.complex), "trials": args.trials}
    write_doc(report("overlap", params, results, True, seeds={"embedding": args.seed}), None)
    return EXIT_OK


# ---------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rlab", description="Ramanujan graphs and complexes: construct, verify, export.")
    ap.add_argument("--threads", type=int, default=None, help="BLAS thread count (overrides RLAB_THREADS)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lps", help="build the LPS graph X^{p,q}")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_lps)

    p = sub.add_parser("spectrum", help="spectrum of a graph document")
    p.add_argument("graph")
    p.add_argument("--ramanujan", action="store_true")
    p.add_argument("--mode", choices=["auto", "full", "extremal"], default="auto")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("ball", help="ball of radius r in the building of PGL_d over F_q((y))")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_ball)

    p = sub.add_parser("cs", help="Cartwright-Steger quotient complex modulo an irreducible polynomial")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--ideal", required=True, help="little-endian coefficients, e.g. 1,1,1 for y^2+y+1")
    p.add_argument("--max-dim", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_cs)

    p = sub.add_parser("hecke", help="Hecke spectrum verdict for a colored complex document")
    p.add_argument("complex")
    p.add_argument("--mode", choices=["auto", "full", "extremal"], default="auto")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_hecke)

    p = sub.add_parser("expand", help="expansion quantities of a complex or graph document")
    p.add_argument("complex")
    p.add_argument("--metric", choices=["cheeger", "coboundary", "filling", "gap", "mixing"], required=True)
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("overlap", help="overlap upper bound from random planar embeddings")
    p.add_argument("complex")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_overlap)
    return ap


def _set_threads(n):
    # must happen before numpy loads its BLAS
    if n:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ[var] = str(n)


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    _set_threads(args.threads or os.environ.get("RLAB_THREADS"))

    from .errors import CapExceeded, ParameterError, RlabError, SingularMatrixError

    try:
        return args.func(args)
    except (UsageError, ParameterError, SingularMatrixError, FileNotFoundError) as exc:
        print(f"rlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceeded as exc:
        print(f"rlab: resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except RlabError as exc:
        print(f"rlab: check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
