"""Command-line front end.

Subcommands: ``graph``, ``corpus-graph``, ``check chain|closure|theorems``,
``verify-paper``.  Exit codes: 0 success, 1 property violation (with witness
dump), 2 input error, 3 budget/threshold exceeded.

Group-spec grammar: ``S:n``, ``A:n``, ``C:n``, ``D:n`` (order 2n),
``PSL2:q``, ``PSL3:3``, ``Sz:8``, ``Schmidt:p,q``, ``file:PATH``, products
joined by ``x`` (left-associative); whitespace is ignored.

Corpus files are line-oriented: ``NAME = SPEC`` (or a bare SPEC), ``#``
comments.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from importlib import resources

from . import catalog
from .arithgraph import (PrimeDigraph, SectionSelector, schmidt_graph,
                         schmidt_graph_bruteforce, theta_local_graph)
from .catalog import GroupSpec, build
from .classgraph import (Corpus, GRAPH_FUNCTIONS, OPERATORS, closure_check,
                         corpus_graph, graph_of)
from .errors import (BudgetExceeded, GroupError, InvalidSpec, ParseError,
                     ThresholdExceeded)
from .permcore import ELEMENT_CAP_ENV, FiniteGroup
from .primeutil import prime_divisors
from .structure import (EXHAUSTIVE_LATTICE_THRESHOLD, hall_subgroup,
                        is_soluble)
from .theorems import (TheoremVerdict, coprime_triple_check,
                       direct_decomposition_check, hall_normal_check,
                       minimal_simple_graph_check, solubility_criteria,
                       sylow_tower_check)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3

THETA_LIMIT = 600


# -- group-spec grammar -----------------------------------------------------

# longest prefixes first so Schmidt/Sz win over S
_KIND_TOKENS = (
    ("Schmidt", "schmidt"),
    ("PSL2", "psl2"),
    ("PSL3", "psl3_3"),
    ("Sz", "sz8"),
    ("file", "file"),
    ("S", "symmetric"),
    ("A", "alternating"),
    ("C", "cyclic"),
    ("D", "dihedral"),
)
_PREFIXES = tuple(tok for tok, _ in _KIND_TOKENS)


def parse_group_spec(text: str) -> GroupSpec:
    """Parse the grammar above into a GroupSpec; ParseError on bad input."""
    stripped = "".join(text.split())
    if not stripped:
        raise ParseError("empty group spec", 0, "a group kind")
    factors = []
    pos = 0
    while True:
        spec, pos = _parse_term(stripped, pos)
        factors.append(spec)
        if pos == len(stripped):
            break
        if stripped[pos] != "x":
            raise ParseError("trailing input", pos, "'x' or end of spec")
        pos += 1
    if len(factors) == 1:
        return factors[0]
    return GroupSpec("product", factors=tuple(factors))


def _parse_term(s: str, pos: int):
    for token, kind in _KIND_TOKENS:
        if s.startswith(token + ":", pos):
            body = pos + len(token) + 1
            if kind == "file":
                end = _file_end(s, body)
                if end == body:
                    raise ParseError("empty file path", body, "a path")
                return GroupSpec("file", path=s[body:end]), end
            if kind == "schmidt":
                p, after = _parse_int(s, body)
                if after >= len(s) or s[after] != ",":
                    raise ParseError("schmidt needs two primes", after, "','")
                q, after = _parse_int(s, after + 1)
                return GroupSpec("schmidt", (p, q)), after
            n, after = _parse_int(s, body)
            if kind == "psl3_3" and n != 3:
                raise ParseError("only PSL3:3 is supported", body, "'3'")
            if kind == "sz8" and n != 8:
                raise ParseError("only Sz:8 is supported", body, "'8'")
            if kind in ("psl3_3", "sz8"):
                return GroupSpec(kind), after
            return GroupSpec(kind, (n,)), after
    raise ParseError("unknown group kind", pos, " or ".join(_PREFIXES))


def _parse_int(s: str, pos: int):
    end = pos
    while end < len(s) and s[end].isdigit():
        end += 1
    if end == pos:
        raise ParseError("expected an integer", pos, "digits")
    return int(s[pos:end]), end


def _file_end(s: str, pos: int) -> int:
    """A file path runs to the next 'x' that starts another term, or the end."""
    i = pos
    while i < len(s):
        if s[i] == "x" and any(s.startswith(t + ":", i + 1) for t in _PREFIXES):
            return i
        i += 1
    return len(s)


def spec_to_text(spec: GroupSpec) -> str:
    """Canonical text for a spec; parse(spec_to_text(s)) == s."""
    if spec.kind == "product":
        return "x".join(spec_to_text(f) for f in spec.factors)
    if spec.kind == "file":
        return f"file:{spec.path}"
    if spec.kind == "schmidt":
        return f"Schmidt:{spec.params[0]},{spec.params[1]}"
    if spec.kind == "psl3_3":
        return "PSL3:3"
    if spec.kind == "sz8":
        return "Sz:8"
    letter = {"symmetric": "S", "alternating": "A", "cyclic": "C",
              "dihedral": "D", "psl2": "PSL2"}[spec.kind]
    return f"{letter}:{spec.params[0]}"


# -- emission -----------------------------------------------------------------

def emit_graph(g: PrimeDigraph, fmt: str = "json") -> str:
    """Byte-deterministic JSON or DOT text for a graph."""
    if fmt == "json":
        payload = {"vertices": list(g.vertices),
                   "edges": [list(e) for e in g.edges]}
        return json.dumps(payload, separators=(",", ":"))
    if fmt == "dot":
        lines = ["digraph primes {"]
        for v in g.vertices:
            lines.append(f"  {v};")
        for a, b in g.edges:
            lines.append(f"  {a} -> {b};")
        lines.append("}")
        return "\n".join(lines)
    raise GroupError(f"unknown format {fmt!r}")


# -- corpora --------------------------------------------------------------------

def parse_corpus_lines(text: str):
    """(name, spec-text) pairs from a corpus file."""
    entries = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" in line:
            name, spec_text = (part.strip() for part in line.split("=", 1))
        else:
            name = spec_text = line
        entries.append((name, spec_text))
    return entries


def builtin_corpus_entries(stretch: bool = False):
    text = resources.files("groupgraphs").joinpath("data/corpus.txt").read_text()
    entries = parse_corpus_lines(text)
    if stretch:
        entries.append(("PSL(2,27)", "PSL2:27"))
    return entries


def build_corpus(entries, jobs: int = 1) -> Corpus:
    """Build all corpus groups (optionally in parallel); order is preserved."""
    def build_one(item):
        name, spec_text = item
        return name, build(parse_group_spec(spec_text))
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            built = list(ex.map(build_one, entries))
    else:
        built = [build_one(e) for e in entries]
    return Corpus(built)


def load_corpus(paths, jobs: int = 1) -> Corpus:
    entries = []
    for path in paths:
        with open(path) as fh:
            entries.extend(parse_corpus_lines(fh.read()))
    return build_corpus(entries, jobs)


# -- check suites -----------------------------------------------------------------

def chain_lines(C: Corpus, jobs: int = 1):
    """Containment chain sylow <= schmidt <= hawkes per group."""
    def check(item):
        name, G = item
        gs, gsch, gh = (graph_of(G, f) for f in ("sylow", "schmidt", "hawkes"))
        ok = gs.is_subgraph(gsch) and gsch.is_subgraph(gh)
        return f"{'PASS' if ok else 'FAIL'} chain {name}: " \
               f"|E_s|={len(gs.edges)} |E_Sch|={len(gsch.edges)} |E_H|={len(gh.edges)}", ok
    results = _fan_out(check, C.entries, jobs)
    lines = [r[0] for r in results]
    return lines, all(r[1] for r in results)


def _fan_out(fun, items, jobs):
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fun, items))
    return [fun(item) for item in items]


EXPECTED_CLOSURE = {
    # (fn, op) -> "holds" / "fails"; survey combinations are reported only
    ("hawkes", "S"): "holds", ("hawkes", "Q"): "holds", ("hawkes", "D0"): "holds",
    ("hawkes", "R0"): "holds", ("hawkes", "N0"): "holds", ("hawkes", "EPhi"): "holds",
    ("schmidt", "S"): "holds", ("schmidt", "Q"): "holds",
    ("schmidt", "D0"): "holds", ("schmidt", "R0"): "holds",
    ("sylow", "Q"): "holds", ("sylow", "R0"): "holds",
    ("sylow", "S"): "fails",
}


def closure_lines(C: Corpus, fn: str, op: str):
    rep = closure_check(C, fn, op)
    lines = []
    skipped = [r for r in rep.per_group if r.status == "skipped"]
    if rep.survey:
        lines.append(f"SURVEY closure {fn} {op}: {rep.verdict}"
                     f" ({len(rep.witnesses)} finding(s), {len(skipped)} skipped)")
        ok = True
    else:
        expected = EXPECTED_CLOSURE.get((fn, op))
        ok = expected is None or rep.verdict == expected
        tag = "PASS" if ok else "FAIL"
        lines.append(f"{tag} closure {fn} {op}: {rep.verdict}"
                     + (f" (expected {expected})" if expected else "")
                     + f" ({len(skipped)} skipped)")
    for w in rep.witnesses:
        lines.append(f"  witness: {w.describe()}")
    return lines, ok, rep


def theorem_lines(C: Corpus, which: str, stretch: bool = False, jobs: int = 1):
    lines = []
    ok = True

    def note(v: TheoremVerdict):
        nonlocal ok
        if v.refutes():
            ok = False
            lines.append(f"FAIL {v.describe()}")
        else:
            lines.append(f"pass {v.describe()}")

    if which in ("tower", "all"):
        for _, G in C.entries:
            note(sylow_tower_check(G))
    if which in ("solubility", "all"):
        for _, G in C.entries:
            note(solubility_criteria(G))
    if which in ("hall", "all"):
        for _, G in C.entries:
            primes = G.prime_divisors()
            for mask in range(1, 1 << len(primes)):
                pi = tuple(p for i, p in enumerate(primes) if mask >> i & 1)
                if len(pi) == len(primes):
                    continue
                note(hall_normal_check(G, pi))
    if which in ("decomposition", "all"):
        for _, G in C.entries:
            fns = ["hawkes", "schmidt"] + (["sylow"] if is_soluble(G) else [])
            for fn in fns:
                note(direct_decomposition_check(G, fn))
    if which in ("coprime", "all"):
        for v in coprime_suite(C):
            note(v)
    if which in ("minimal-simple", "all"):
        prebuilt = {name: G for name, G in C.entries}
        for v in minimal_simple_graph_check(prebuilt, include_psl2_27=stretch):
            note(v)
    return lines, ok


COPRIME_ORDER_CAP = 2000


def coprime_suite(C: Corpus):
    """Coprime-index triple instances over the corpus.

    For soluble groups with exactly three prime divisors (small enough), the
    three Hall subgroups each omitting one prime have pairwise coprime
    indexes.  S4 with its Sylow 2-subgroup, A4 and an S3 gives the standard
    non-coprime contrast instance.
    """
    from .permcore import subgroup_generated
    from .structure import sylow_subgroup
    out = []
    for name, G in C.entries:
        if G.order > COPRIME_ORDER_CAP or not is_soluble(G):
            continue
        primes = G.prime_divisors()
        if len(primes) != 3:
            continue
        halls = []
        for drop in primes:
            pi = tuple(p for p in primes if p != drop)
            halls.append(hall_subgroup(G, pi))
        out.append(coprime_triple_check(G, *halls))
    s4 = next((G for name, G in C.entries if G.name == "S4"), None)
    if s4 is not None:
        # the standard non-coprime contrast: Sylow 2, the alternating subgroup,
        # and a point stabilizer isomorphic to S3
        P2 = sylow_subgroup(s4, 2)
        a4 = subgroup_generated(s4, [g for g in s4.elements if _is_even(g)])
        s3 = subgroup_generated(s4, [g for g in s4.elements if g[3] == 3])
        out.append(coprime_triple_check(s4, P2, a4, s3))
    return out


def _is_even(p) -> bool:
    return sum(len(c) - 1 for c in p.cycles()) % 2 == 0


def theta_lines(C: Corpus, jobs: int = 1):
    """Generic-constructor agreement on corpus groups up to THETA_LIMIT."""
    def check(item):
        name, G = item
        if G.order > THETA_LIMIT:
            return f"skip theta {name}: order {G.order} above {THETA_LIMIT}", True
        ok = (theta_local_graph(G, SectionSelector("sylow-p"), True) == graph_of(G, "sylow")
              and theta_local_graph(G, SectionSelector("all-p-subgroups"), True)
              == graph_of(G, "schmidt")
              and theta_local_graph(G, SectionSelector("chief-factors-with-p"), False)
              == graph_of(G, "hawkes"))
        return f"{'PASS' if ok else 'FAIL'} theta {name}", ok
    results = _fan_out(check, C.entries, jobs)
    return [r[0] for r in results], all(r[1] for r in results)


def oracle_lines(C: Corpus, jobs: int = 1):
    """Pair-scan vs brute-force Schmidt oracle on groups within the lattice bound."""
    def check(item):
        name, G = item
        if G.order > EXHAUSTIVE_LATTICE_THRESHOLD:
            return f"skip oracle {name}: order {G.order}", True
        ok = schmidt_graph(G) == schmidt_graph_bruteforce(G)
        return f"{'PASS' if ok else 'FAIL'} schmidt oracle {name}", ok
    results = _fan_out(check, C.entries, jobs)
    return [r[0] for r in results], all(r[1] for r in results)


# -- verify-paper -----------------------------------------------------------------

FIXTURES = (
    ("hawkes", "S4", ((2, 2), (2, 3), (3, 2))),
    ("sylow", "S4", ((3, 2),)),
    ("sylow", "A4", ((2, 3),)),
)


def verify_report(stretch: bool = False, jobs: int = 1) -> tuple[str, int]:
    """The full verification suite over the bundled corpus.

    Returns (report text, exit code); the text is byte-identical across runs
    and across --jobs settings.
    """
    lines = []
    ok = True
    budget_hit = False

    C = build_corpus(builtin_corpus_entries(stretch), jobs=jobs)
    lines.append(f"corpus: {len(C)} groups")

    lines.append("== graph fixtures ==")
    for fn, name, expected in FIXTURES:
        got = C.graph(name, fn)
        good = got.edges == expected
        ok &= good
        lines.append(f"{'PASS' if good else 'FAIL'} {fn}({name}) edges {got.edges}"
                     + ("" if good else f" expected {expected}"))

    lines.append("== minimal simple schmidt graphs ==")
    prebuilt = dict(C.entries)
    for v in minimal_simple_graph_check(prebuilt, include_psl2_27=stretch):
        good = bool(v.conclusion_holds)
        ok &= good
        lines.append(f"{'PASS' if good else 'FAIL'} {v.group} edges "
                     f"{v.witness['computed_edges']}")

    lines.append("== containment chain ==")
    chain, good = chain_lines(C, jobs)
    ok &= good
    lines.extend(chain)

    lines.append("== closure suite ==")
    for fn in ("hawkes", "schmidt", "sylow"):
        for op in OPERATORS:
            try:
                sub, good, rep = closure_lines(C, fn, op)
            except (BudgetExceeded, ThresholdExceeded) as e:
                lines.append(f"SKIP closure {fn} {op}: {e}")
                budget_hit = True
                continue
            ok &= good
            lines.extend(sub)
            if (fn, op) == ("sylow", "S"):
                found = any(w.group == "S4" and w.kind == "subgroup"
                            and w.edge == (2, 3) for w in rep.witnesses)
                ok &= found
                lines.append(f"{'PASS' if found else 'FAIL'} sylow S-failure "
                             "witness A4 <= S4 present")

    lines.append("== schmidt pair-scan vs lattice oracle ==")
    sub, good = oracle_lines(C, jobs)
    ok &= good
    lines.extend(sub)

    lines.append("== theorem suite ==")
    sub, good = theorem_lines(C, "all", stretch, jobs)
    ok &= good
    lines.extend(sub)

    lines.append("== theta-local agreement ==")
    sub, good = theta_lines(C, jobs)
    ok &= good
    lines.extend(sub)

    lines.append(f"OVERALL: {'PASS' if ok else 'FAIL'}")
    code = EXIT_OK if ok else EXIT_VIOLATION
    if budget_hit and ok:
        code = EXIT_BUDGET
    return "\n".join(lines) + "\n", code


# -- entry point ------------------------------------------------------------------

def _arg_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="groupgraphs",
        description="Prime digraphs of finite permutation groups: compute "
                    "Gruenberg-Kegel, Hawkes, Sylow and Schmidt graphs, check "
                    "their closure properties and the structural criteria "
                    "they support.",
        epilog=f"Element budget: set {ELEMENT_CAP_ENV} to override the default "
               "200000 cap on group enumeration size. Exit codes: 0 ok, "
               "1 property violation, 2 input error, 3 budget/threshold exceeded.")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("graph", help="graph of a single group")
    g.add_argument("--fn", required=True, choices=sorted(GRAPH_FUNCTIONS))
    g.add_argument("--group", required=True, help="group spec, e.g. S:4 or S:3xC:5")
    g.add_argument("--format", default="json", choices=("json", "dot"))

    cg = sub.add_parser("corpus-graph", help="union graph of a corpus")
    cg.add_argument("--fn", required=True, choices=sorted(GRAPH_FUNCTIONS))
    cg.add_argument("--corpus", required=True, nargs="+", help="corpus file(s)")
    cg.add_argument("--format", default="json", choices=("json", "dot"))
    cg.add_argument("--jobs", type=int, default=1)

    ck = sub.add_parser("check", help="containment / closure / theorem checks")
    ck.add_argument("what", choices=("chain", "closure", "theorems"))
    ck.add_argument("--corpus", required=True, nargs="+")
    ck.add_argument("--fn", choices=sorted(GRAPH_FUNCTIONS))
    ck.add_argument("--op", choices=OPERATORS)
    ck.add_argument("--which",
                    choices=("tower", "solubility", "hall", "decomposition",
                             "coprime", "minimal-simple", "all"), default="all")
    ck.add_argument("--jobs", type=int, default=1)

    vp = sub.add_parser("verify-paper", help="run the full verification suite "
                                             "over the bundled corpus")
    vp.add_argument("--jobs", type=int, default=1)
    vp.add_argument("--stretch", action="store_true",
                    help="include PSL(2,27) (slower)")
    return ap


def run(argv=None) -> int:
    try:
        args = _arg_parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code not in (0, None) else EXIT_OK
    try:
        if args.command == "graph":
            G = build(parse_group_spec(args.group))
            print(emit_graph(graph_of(G, args.fn), args.format))
            return EXIT_OK
        if args.command == "corpus-graph":
            C = load_corpus(args.corpus, args.jobs)
            print(emit_graph(corpus_graph(C, args.fn), args.format))
            return EXIT_OK
        if args.command == "check":
            return _run_check(args)
        if args.command == "verify-paper":
            text, code = verify_report(args.stretch, args.jobs)
            print(text, end="")
            return code
    except (ParseError, InvalidSpec) as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (BudgetExceeded, ThresholdExceeded) as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except GroupError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_INPUT  # pragma: no cover


def _run_check(args) -> int:
    C = load_corpus(args.corpus, args.jobs)
    if args.what == "chain":
        lines, ok = chain_lines(C, args.jobs)
    elif args.what == "closure":
        if not args.fn or not args.op:
            print("check closure needs --fn and --op", file=sys.stderr)
            return EXIT_INPUT
        lines, ok, _ = closure_lines(C, args.fn, args.op)
    else:
        lines, ok = theorem_lines(C, args.which, jobs=args.jobs)
    print("\n".join(lines))
    return EXIT_OK if ok else EXIT_VIOLATION


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
