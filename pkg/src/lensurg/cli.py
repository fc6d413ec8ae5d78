"""Command line interface: lensurg <subcommand> ..."""
import argparse
import json
import os
import re
import sys

from . import __version__, casson, plumbing, seifert
from .core import DomainError, fmt, parse_rat
from .lens import LensSpace, d_lens, d_trace
from .obstruction import Options, candidates, check_candidate, fmt_n, witness_branch
from .output import (ReportCache, all_rows, digest, report_rows, to_csv, to_jsonl)


def _options(a):
    return Options(delta_lambda=not a.no_delta_lambda, lspace_all_m=a.lspace_all_m,
                   dm_source=a.dm_source, s_max=a.s_max)


def _add_engine_flags(sp):
    sp.add_argument("--no-delta-lambda", action="store_true", help="skip the Casson-Walker integrality filter")
    sp.add_argument("--lspace-all-m", action="store_true", help="apply the L-space lemma for m < 0 too")
    sp.add_argument("--dm-source", choices=["exact", "closed"], default="exact")
    sp.add_argument("--s-max", type=int, default=3, help="orbit length where M is not a lens space")


def cmd_d(a, out):
    if a.lens:
        p, q = a.lens
        L = LensSpace.from_signed(p, q) if p != 1 else LensSpace(1, 0)
        if a.reverse:
            L = L.reversed()
        val = d_lens(L, a.t)
        print(fmt(val), file=out)
        if a.trace:
            _, steps = d_trace(L.p, L.q, a.t)
            for pp, qq, ii, term in steps:
                print(f"  L({pp},{qq}) i={ii}: {fmt(term)}", file=out)
        return 0
    p, m, k = a.plumbing
    f = plumbing.intersection_form(p, m, k, a.framing)
    res = plumbing.maximize(f, plumbing.shifted_vector(f, a.s))
    print(fmt(res.value), file=out)
    return 0


def cmd_dedekind(a, out):
    fn = casson.dedekind_sum_reciprocity if a.reciprocity else casson.dedekind_sum
    print(fmt(fn(a.b, a.a)), file=out)
    return 0


def _fibers(spec):
    out = []
    for tok in spec:
        r = parse_rat(tok)
        out.append((r.denominator, r.numerator))
    return out


def cmd_cw(a, out):
    if a.lens:
        print(fmt(casson.lambda_of(LensSpace.from_signed(*a.lens))), file=out)
    elif a.surgery:
        p, m, k = a.surgery
        print(fmt(casson.lambda_M(p, m, k)), file=out)
        if a.filter:
            allowed = sorted(casson.cw_sign_filter(p, m, k))
            print("admissible q: " + " ".join(str(q) for q in allowed), file=out)
    else:
        print(fmt(casson.lambda_seifert(_fibers(a.fibers))), file=out)
    return 0


def _fibration(a):
    if a.fibers:
        return seifert.SeifertFibration(tuple(_fibers(a.fibers)))
    p, k, m = a.pkm
    return seifert.surgery_on_simple_knot(p, k, m)


def cmd_seifert(a, out):
    if a.action == "constructions":
        for m, k, f, L in seifert.verify_constructions(a.p):
            print(f"(m,k)=({m},{k}) {f} = {L}", file=out)
        if a.p <= 3:
            print("(m,k)=(2,3) omitted: needs p > 3", file=out)
        return 0
    f = _fibration(a)
    if a.action == "normalize":
        g = seifert.normalize(f)
        print(f"{g}  e={fmt(g.euler)}", file=out)
        return 0
    L = seifert.to_lens(f)
    print(str(L) if L is not None else "not a lens space (three exceptional fibers)", file=out)
    return 0


def cmd_plumbing(a, out):
    p, m, k = a.p, a.m, a.k
    f = plumbing.intersection_form(p, m, k, a.framing)
    rng = range(a.s_max + 1)
    print(f"n={f.n} det={f.det}", file=out)
    for s in rng:
        res = plumbing.maximize(f, plumbing.shifted_vector(f, s))
        line = f"s={s} d={fmt(res.value)} K={list(res.K)}"
        if a.closed and s <= 3:
            cf = plumbing.d_closed_form(p, m, k, s, a.framing)
            line += f" closed={fmt(cf)}" + ("" if cf == res.value else " MISMATCH")
        print(line, file=out)
    return 0


def solutions(p, q):
    out = []
    for k in range(1, p // 2 + 1):
        for qq in (abs(q), -abs(q)):
            num = k * k + qq
            if num % p == 0 and num // p != k:
                out.append((num // p, k))
    return sorted(set(out))


def cmd_check(a, out):
    p, q = a.p, a.q
    if abs(q) <= 7 and not a.allow_small_q:
        print("warning: |q| <= 7 is outside the classified range", file=sys.stderr)
    if a.m is not None and a.k is not None:
        pairs = [(a.m, a.k)]
    else:
        pairs = solutions(p, q)
    if not pairs:
        print(f"(p,q)=({p},{q}): no homological solutions", file=out)
        return 0
    opts = _options(a)
    reports = [check_candidate(p, q, m, k, opts) for m, k in pairs]
    if a.format == "json":
        out.write(to_jsonl([r.to_dict() for r in reports]))
        return 0
    if a.format == "csv":
        out.write(to_csv(all_rows(reports)))
        return 0
    for r in reports:
        c = r.candidate
        print(f"(p,q,m,k)=({c.p},{c.q},{c.m},{c.k}) q'={c.qprime} framing={'+' if c.framing > 0 else '-'}", file=out)
        for f in r.filters:
            print(f"  {f.name:16s} {'pass' if f.passed else 'FAIL'} {f.detail}", file=out)
        shown = [b for b in r.branches if b.passed] or ([witness_branch(r.branches)] if r.branches else [])
        for b in shown[:a.branches]:
            ns = " ".join(fmt_n(x) for x in b.N[:min(len(b.N), 8)])
            more = " ..." if len(b.N) > 8 else ""
            print(f"  branch {b.reason()}: N = {ns}{more}", file=out)
        for s, x, y in r.closed_form_mismatch:
            print(f"  note: d(M) at s={s} is {fmt(x)}, closed form gives {fmt(y)}", file=out)
        print(f"  verdict: {r.verdict}" + (f" ({r.reason})" if r.reason else ""), file=out)
    return 0


def cmd_enumerate(a, out):
    opts = _options(a)
    cache_dir = os.environ.get("SURGERY_CACHE_DIR") or a.cache_dir
    cache = ReportCache(cache_dir) if cache_dir else None
    tag = json.dumps([opts.delta_lambda, opts.lspace_all_m, opts.dm_source, opts.s_max])
    cands = candidates(a.p_max, a.q_bound, a.min_q)
    results = {}
    todo = []
    for t in cands:
        hit = cache.get(cache.key(*t, tag)) if cache else None
        if hit is not None:
            results[t] = hit
        else:
            todo.append(t)
    if todo:
        if a.workers > 1:
            from concurrent.futures import ProcessPoolExecutor
            with ProcessPoolExecutor(a.workers) as ex:
                fresh = list(ex.map(_entry, todo, [opts] * len(todo), chunksize=8))
        else:
            fresh = [_entry(t, opts) for t in todo]
        for t, e in zip(todo, fresh):
            results[t] = e
            if cache:
                cache.put(cache.key(*t, tag), e)
    if a.format == "jsonl":
        text = to_jsonl([results[t]["report"] for t in cands])
    else:
        rows = []
        for t in cands:
            rows.extend(results[t]["rows"])
        rows = [[int(r[0]), int(r[1]), int(r[2]), int(r[3])] + list(r[4:]) for r in rows]
        rows.sort(key=lambda r: (r[0], r[1], r[2], r[3], r[9]))
        if a.format == "csv":
            text = to_csv(rows)
        else:
            keep = [r for r in rows if a.all or r[8] != "REFUTED"]
            text = "".join(" ".join(str(x) for x in r[:4]) + "  " + " ".join(r[4:8]) + f"  {r[8]}  {r[9]}\n"
                           for r in keep)
    if a.output:
        tmp = a.output + ".tmp"
        with open(tmp, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, a.output)
    else:
        out.write(text)
    if a.manifest:
        man = {"command": "enumerate",
               "parameters": {"p_max": a.p_max, "q_bound": a.q_bound, "min_q": a.min_q,
                              "format": a.format, "options": json.loads(tag)},
               "tool_version": __version__, "output_digest": digest(text)}
        with open(a.manifest, "w", encoding="utf-8") as fh:
            json.dump(man, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0


def _entry(t, opts):
    r = check_candidate(*t, opts)
    return {"rows": [[str(x) for x in row] for row in report_rows(r)], "report": r.to_dict()}


# let "-2/1" through as a value, like "-2"
_NEG_VALUE = re.compile(r"^-\d+(/\d+)?$")


class _Parser(argparse.ArgumentParser):
    def __init__(self, *a, **kw):
        super().__init__(*a, **kw)
        self._negative_number_matcher = _NEG_VALUE


def build_parser():
    ap = _Parser(prog="lensurg", description=__doc__)
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    sp = sub.add_parser("d", help="correction term of a lens space or plumbing class")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--lens", nargs=2, type=int, metavar=("P", "Q"))
    g.add_argument("--plumbing", nargs=3, type=int, metavar=("P", "M", "K"))
    sp.add_argument("--t", type=int, default=0, help="Spin^c label (lens)")
    sp.add_argument("--s", type=int, default=0, help="shift t_M + s PD[mu] (plumbing)")
    sp.add_argument("--framing", choices=["pos", "neg"], default="pos")
    sp.add_argument("--reverse", action="store_true")
    sp.add_argument("--trace", action="store_true")
    sp.set_defaults(fn=cmd_d)

    sp = sub.add_parser("dedekind", help="Dedekind sum s(b,a)")
    sp.add_argument("b", type=int)
    sp.add_argument("a", type=int)
    sp.add_argument("--reciprocity", action="store_true")
    sp.set_defaults(fn=cmd_dedekind)

    sp = sub.add_parser("casson-walker", help="Casson-Walker invariant")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--lens", nargs=2, type=int, metavar=("A", "B"))
    g.add_argument("--surgery", nargs=3, type=int, metavar=("P", "M", "K"))
    g.add_argument("--fibers", nargs="+", metavar="B/A")
    sp.add_argument("--filter", action="store_true", help="also print admissible signs of q")
    sp.set_defaults(fn=cmd_cw)

    sp = sub.add_parser("seifert", help="Seifert fibrations of surgeries on simple knots")
    ss = sp.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name in ("normalize", "to-lens"):
        x = ss.add_parser(name)
        g = x.add_mutually_exclusive_group(required=True)
        g.add_argument("--pkm", nargs=3, type=int, metavar=("P", "K", "M"))
        g.add_argument("--fibers", nargs="+", metavar="B/A")
        x.set_defaults(fn=cmd_seifert)
    x = ss.add_parser("constructions")
    x.add_argument("p", type=int)
    x.set_defaults(fn=cmd_seifert)

    sp = sub.add_parser("plumbing-d", help="d(M, t_M + s PD[mu]) by exact lattice maximization")
    sp.add_argument("p", type=int)
    sp.add_argument("m", type=int)
    sp.add_argument("k", type=int)
    sp.add_argument("--framing", choices=["pos", "neg"], required=True)
    sp.add_argument("--s-max", type=int, default=3)
    sp.add_argument("--closed", action="store_true", help="compare with the closed forms")
    sp.set_defaults(fn=cmd_plumbing)

    sp = sub.add_parser("check", help="run the obstruction pipeline on (p,q)")
    sp.add_argument("p", type=int)
    sp.add_argument("q", type=int)
    sp.add_argument("--m", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--format", choices=["text", "json", "csv"], default="text")
    sp.add_argument("--branches", type=int, default=3, help="passing branches to print")
    sp.add_argument("--allow-small-q", action="store_true")
    _add_engine_flags(sp)
    sp.set_defaults(fn=cmd_check)

    sp = sub.add_parser("enumerate", help="sweep all candidates and emit reports")
    sp.add_argument("--p-max", type=int, required=True)
    sp.add_argument("--q-bound", type=int, required=True)
    sp.add_argument("--min-q", type=int, default=8, help="smallest |q| considered")
    sp.add_argument("--format", choices=["csv", "jsonl", "text"], default="csv")
    sp.add_argument("--cache-dir", default=None)
    sp.add_argument("--output", "-o", default=None)
    sp.add_argument("--manifest", default=None, help="write a run manifest JSON here")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--all", action="store_true", help="text format: include refuted rows")
    _add_engine_flags(sp)
    sp.set_defaults(fn=cmd_enumerate)
    return ap


def main(argv=None, out=None):
    out = out or sys.stdout
    ap = build_parser()
    a = ap.parse_args(argv)
    try:
        return a.fn(a, out)
    except DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        # output closed early (e.g. piped into head)
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0


if __name__ == "__main__":
    sys.exit(main())
