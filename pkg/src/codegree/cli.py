"""Command-line interface.

Subcommands: construct, verify, search, blowup, detect, analyze, certify.
Exit codes: 0 pass/found, 1 fail/none, 2 usage or parameter error,
3 search stopped at its budget.

File formats are line-oriented text; `#` starts a comment.
  family:      kld <k> <ell> <d>      (ell is `-` when not fixed)
               one type per line, coordinates space-separated
  hypergraph:  hg <n> <k> [<d>]
               parts <s1> ... <sd>    (optional)
               one edge per line, 1-based sorted vertices
  certificate: walk <kind> <length> [missing=<index>]
               the vertex/label sequence on the next line
"""

from __future__ import annotations

import argparse
import sys
import time
from typing import Optional

from .construct import (
    base_family,
    hls_family,
    local_replacement_family,
    stable_family,
)
from .family import TypeFamily, check_stability, verify_family
from .hypergraph import (
    Hypergraph,
    WalkCertificate,
    blow_up,
    has_hom_tight_cycle,
    has_hom_tight_cycle_minus,
    has_type_cycle,
    has_type_cycle_minus,
    min_codegree,
    validate_label_certificate,
    validate_vertex_certificate,
)
from .lattice import CapacityError, DataError, ParameterError
from .search import brute_force_enumerate, dfs_enumerate, dfs_exists
from .structure import find_structural_partition

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_INCOMPLETE = 3


# ---------------------------------------------------------------------------
# file formats


def _content_lines(path: str) -> list[str]:
    out = []
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if line:
                out.append(line)
    return out


def write_family(fam: TypeFamily, path: str) -> None:
    with open(path, "w") as fh:
        ell = "-" if fam.ell is None else str(fam.ell)
        fh.write(f"kld {fam.k} {ell} {fam.d}\n")
        for t in sorted(fam.types, reverse=True):
            fh.write(" ".join(map(str, t)) + "\n")


def read_family(path: str) -> TypeFamily:
    lines = _content_lines(path)
    if not lines or not lines[0].startswith("kld"):
        raise DataError(f"{path}: expected a `kld <k> <ell> <d>` header")
    parts = lines[0].split()
    if len(parts) != 4:
        raise DataError(f"{path}: malformed header {lines[0]!r}")
    k = int(parts[1])
    ell = None if parts[2] == "-" else int(parts[2])
    d = int(parts[3])
    types = []
    for line in lines[1:]:
        t = tuple(int(x) for x in line.split())
        if len(t) != d or sum(t) != k or min(t) < 0:
            raise DataError(f"{path}: type {t} does not sum to {k} over {d} parts")
        types.append(t)
    return TypeFamily(k=k, ell=ell, d=d, types=frozenset(types))


def write_hypergraph(H: Hypergraph, path: str) -> None:
    with open(path, "w") as fh:
        d = H.family.d if H.family else None
        fh.write(f"hg {H.n} {H.k}" + (f" {d}" if d else "") + "\n")
        if H.partition:
            dd = max(H.partition.values())
            sizes = [0] * dd
            for v in H.partition.values():
                sizes[v - 1] += 1
            fh.write("parts " + " ".join(map(str, sizes)) + "\n")
        for e in H.edge_list():
            fh.write(" ".join(map(str, e)) + "\n")


def read_hypergraph(path: str) -> Hypergraph:
    lines = _content_lines(path)
    if not lines or not lines[0].startswith("hg"):
        raise DataError(f"{path}: expected a `hg <n> <k> [<d>]` header")
    head = lines[0].split()
    if len(head) not in (3, 4):
        raise DataError(f"{path}: malformed header {lines[0]!r}")
    n, k = int(head[1]), int(head[2])
    body = lines[1:]
    partition = None
    if body and body[0].startswith("parts"):
        sizes = [int(x) for x in body[0].split()[1:]]
        if sum(sizes) != n:
            raise DataError(f"{path}: part sizes {sizes} do not sum to n={n}")
        partition = {}
        v = 1
        for i, s in enumerate(sizes, start=1):
            for _ in range(s):
                partition[v] = i
                v += 1
        body = body[1:]
    edges = []
    for line in body:
        e = tuple(int(x) for x in line.split())
        if list(e) != sorted(set(e)) or len(e) != k:
            raise DataError(f"{path}: edge {e} is not {k} sorted distinct vertices")
        edges.append(e)
    return Hypergraph(n, k, edges=edges, partition=partition)


def write_certificate(cert: WalkCertificate, path: str) -> None:
    with open(path, "w") as fh:
        head = f"walk {cert.kind} {cert.length}"
        if cert.kind == "cycle-minus":
            head += f" missing={cert.missing_window}"
        fh.write(head + "\n")
        fh.write(" ".join(map(str, cert.sequence)) + "\n")


def read_certificate(path: str) -> WalkCertificate:
    lines = _content_lines(path)
    if len(lines) != 2 or not lines[0].startswith("walk"):
        raise DataError(f"{path}: expected `walk <kind> <length>` then the sequence")
    head = lines[0].split()
    kind = head[1]
    length = int(head[2])
    missing = None
    for extra in head[3:]:
        if extra.startswith("missing="):
            missing = int(extra.split("=", 1)[1])
        else:
            raise DataError(f"{path}: unknown header field {extra!r}")
    seq = tuple(int(x) for x in lines[1].split())
    if len(seq) != length:
        raise DataError(f"{path}: sequence length {len(seq)} != declared {length}")
    return WalkCertificate(kind, seq, missing_window=missing)


# ---------------------------------------------------------------------------
# reporting


def _report(command: str, t0: float, outcome: str, **fields) -> None:
    print(f"command={command}")
    for key, val in fields.items():
        print(f"{key}={val}")
    print(f"elapsed={time.monotonic() - t0:.3f}s")
    print(f"outcome={outcome}")


# ---------------------------------------------------------------------------
# subcommands


def _cmd_construct(args) -> int:
    t0 = time.monotonic()
    if args.kind == "base":
        if args.d is None:
            raise ParameterError("construct base needs --d")
        fam = base_family(args.k, args.d)
    elif args.kind == "hls":
        fam = hls_family(args.k, args.ell)
    elif args.kind == "local-replacement":
        fam, plan = local_replacement_family(args.k, args.ell)
    else:
        fam, plan = stable_family(args.k, args.ell)
    write_family(fam, args.out)
    extra = {}
    if args.kind in ("local-replacement", "stable"):
        extra["replaced"] = len(plan.problematic)
    _report(
        "construct", t0, "pass",
        kind=args.kind, k=fam.k, ell=fam.ell if fam.ell is not None else "-",
        d=fam.d, types=len(fam.types), out=args.out, **extra,
    )
    return EXIT_PASS


def _cmd_verify(args) -> int:
    t0 = time.monotonic()
    fam = read_family(args.family)
    if args.ell is not None:
        fam = TypeFamily(fam.k, args.ell, fam.d, fam.types)
    report = verify_family(fam)
    fields = {
        "family": args.family, "k": fam.k, "ell": fam.ell, "d": fam.d,
        "p1": report.p1, "p2": report.p2, "components": len(report.certificates),
    }
    if report.p1_witness is not None:
        fields["uncovered"] = report.p1_witness
    if report.p2_witness is not None:
        fields["bad_component"] = sorted(report.p2_witness)
    ok = report.passed
    if args.stable:
        stable, sreport = check_stability(fam)
        fields["stable"] = stable
        if not stable and sreport.p2_witness is not None:
            fields["unstable_component"] = sorted(sreport.p2_witness)
        ok = ok and stable
    _report("verify", t0, "pass" if ok else "fail", **fields)
    return EXIT_PASS if ok else EXIT_FAIL


def _cmd_search(args) -> int:
    t0 = time.monotonic()
    kwargs = {}
    if args.mode != "brute":
        kwargs = dict(
            budget_nodes=args.budget,
            checkpoint=args.checkpoint,
            resume=args.resume,
            workers=args.workers,
        )
    if args.mode == "count":
        result = dfs_enumerate(args.k, args.ell, args.d, **kwargs)
    elif args.mode == "exists":
        result = dfs_exists(args.k, args.ell, args.d, **kwargs)
    else:
        result = brute_force_enumerate(args.k, args.ell, args.d)
    fields = dict(
        mode=args.mode, k=args.k, ell=args.ell, d=args.d,
        count=result.count, nodes=result.nodes, convention=result.convention,
    )
    if result.example is not None and args.mode == "exists":
        fields["example"] = sorted(result.example, reverse=True)
    _report("search", t0, result.status, **fields)
    if not result.complete:
        return EXIT_INCOMPLETE
    if args.mode == "exists" and result.example is None:
        return EXIT_FAIL
    return EXIT_PASS


def _cmd_blowup(args) -> int:
    t0 = time.monotonic()
    fam = read_family(args.family)
    sizes = tuple(int(x) for x in args.sizes.split(","))
    H = blow_up(fam, sizes, materialize=True)
    write_hypergraph(H, args.out)
    deg, witness = min_codegree(H)
    _report(
        "blowup", t0, "pass",
        family=args.family, sizes=sizes, n=H.n, edges=H.num_edges,
        min_codegree=deg, witness=witness, out=args.out,
    )
    return EXIT_PASS


def _cmd_detect(args) -> int:
    t0 = time.monotonic()
    fields: dict = dict(level=args.level, ell=args.ell, minus=args.minus)
    if args.level == "label":
        fam = read_family(args.family)
        fields["family"] = args.family
        fn = has_type_cycle_minus if args.minus else has_type_cycle
        cert = fn(fam, args.ell, state_cap=args.state_cap)
    else:
        H = read_hypergraph(args.graph)
        fields["graph"] = args.graph
        fn = has_hom_tight_cycle_minus if args.minus else has_hom_tight_cycle
        cert = fn(H, args.ell, state_cap=args.state_cap)
    if cert is not None and args.cert_out:
        write_certificate(cert, args.cert_out)
        fields["certificate"] = args.cert_out
    if cert is not None:
        fields["sequence"] = " ".join(map(str, cert.sequence))
    _report("detect", t0, "some" if cert is not None else "none", **fields)
    return EXIT_PASS if cert is not None else EXIT_FAIL


def _cmd_analyze(args) -> int:
    t0 = time.monotonic()
    H = read_hypergraph(args.graph)
    out = find_structural_partition(H)
    fields: dict = dict(graph=args.graph, n=H.n, k=H.k)
    if out.warning:
        fields["warning"] = out.warning
    if out.certificate is not None:
        fields["B"] = " ".join(map(str, sorted(out.certificate.B)))
        fields["B_size"] = len(out.certificate.B)
        _report("analyze", t0, "pass", **fields)
        return EXIT_PASS
    fields["stage"] = out.failure_stage
    _report("analyze", t0, "fail", **fields)
    return EXIT_FAIL


def _cmd_certify(args) -> int:
    t0 = time.monotonic()
    cert = read_certificate(args.cert)
    if args.graph:
        H = read_hypergraph(args.graph)
        ok = validate_vertex_certificate(cert, H)
        target = args.graph
    else:
        fam = read_family(args.family)
        ok = validate_label_certificate(cert, fam)
        target = args.family
    _report(
        "certify", t0, "pass" if ok else "fail",
        cert=args.cert, target=target, kind=cert.kind, length=cert.length,
    )
    return EXIT_PASS if ok else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="codegree",
        description="type families, tight-cycle-free blow-ups and certificates",
    )
    sub = top.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("construct", help="build a named family and write it")
    p.add_argument("--kind", required=True,
                   choices=["base", "hls", "local-replacement", "stable"])
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--ell", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_construct)

    p = sub.add_parser("verify", help="check P1/P2 (and optionally stability)")
    p.add_argument("--family", required=True)
    p.add_argument("--ell", type=int, help="override the file's ell")
    p.add_argument("--stable", action="store_true")
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("search", help="enumerate or find (k,ell;d)-families")
    p.add_argument("--mode", required=True, choices=["count", "exists", "brute"])
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--budget", type=int, help="node budget; exceeded => exit 3")
    p.add_argument("--checkpoint", help="checkpoint file for long runs")
    p.add_argument("--resume", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(fn=_cmd_search)

    p = sub.add_parser("blowup", help="materialize a family blow-up")
    p.add_argument("--family", required=True)
    p.add_argument("--sizes", required=True, help="comma-separated part sizes")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_blowup)

    p = sub.add_parser("detect", help="exact tight-cycle detection")
    p.add_argument("--level", required=True, choices=["label", "vertex"])
    p.add_argument("--family", help="family file (label level)")
    p.add_argument("--graph", help="hypergraph file (vertex level)")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--minus", action="store_true")
    p.add_argument("--state-cap", type=int, default=5000)
    p.add_argument("--cert-out")
    p.set_defaults(fn=_cmd_detect)

    p = sub.add_parser("analyze", help="extract the odd-intersecting bipartition")
    p.add_argument("--graph", required=True)
    p.set_defaults(fn=_cmd_analyze)

    p = sub.add_parser("certify", help="validate a walk certificate file")
    p.add_argument("--cert", required=True)
    p.add_argument("--graph")
    p.add_argument("--family")
    p.set_defaults(fn=_cmd_certify)
    return top


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.cmd == "detect" and not (args.family if args.level == "label" else args.graph):
            raise ParameterError("detect needs --family (label) or --graph (vertex)")
        if args.cmd == "certify" and not (args.graph or args.family):
            raise ParameterError("certify needs --graph or --family")
        return args.fn(args)
    except (ParameterError, DataError, CapacityError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
