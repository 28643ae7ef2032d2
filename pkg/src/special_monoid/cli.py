"""Decide word problems of special monoids with synthesized context-free grammars.

Exit codes: 0 yes/equal/success, 1 no/unequal, 2 unknown or budget
exhausted, 3 usage or input error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from pathlib import Path

from . import __version__, oracle, pieces, pipeline, symbols
from .errors import BudgetExhausted, PresentationNotNormalized, UnitsSpecError
from .lang import (GrammarSyntaxError, MonadicSpecError, MonadicSystemSpec, RegexError, RuleFamily,
                   ancestors, is_empty, language_slice, parse_grammar, serialize_grammar)
from .presentation import PresentationError, parse_presentation, serialize_presentation, validate
from .units import load_units_spec, trivial

EXIT_YES, EXIT_NO, EXIT_UNKNOWN, EXIT_ERROR = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_ERROR)


def _w(word: str) -> str:
    return symbols.render_word(word)


class Reporter:
    def __init__(self, fmt: str, out=None):
        self.fmt = fmt
        self.out = out or sys.stdout
        self.data: dict = {}
        self.lines: list[str] = []

    def line(self, text: str = ""):
        self.lines.append(text)

    def set(self, **kw):
        self.data.update(kw)

    def flush(self):
        if self.fmt == "json":
            json.dump(self.data, self.out, ensure_ascii=False, indent=2, sort_keys=True)
            self.out.write("\n")
        else:
            for l in self.lines:
                print(l, file=self.out)


def _budget(args) -> oracle.Budget:
    for name in ("max_length", "max_states", "max_rules"):
        v = getattr(args, name)
        if v is not None and v <= 0:
            raise UsageError(f"--{name.replace('_', '-')} must be positive")
    return oracle.Budget(args.max_length, args.max_states or 2_000_000, args.max_rules or 256)


def _read(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _presentation(path):
    return parse_presentation(_read(path))


def _word(text: str, alphabet, what="word") -> str:
    w = symbols.parse_word(text)
    bad = sorted({c for c in w if c not in alphabet})
    if bad:
        raise UsageError(f"{what} {text!r} uses symbols outside the alphabet: {', '.join(bad)}")
    return w


def _units_spec(arg):
    if arg is None:
        raise UsageError("--units is required")
    path = Path(arg)
    if not path.exists() and arg == "trivial":
        return trivial()
    if not path.exists():
        raise UsageError(f"units spec {arg} not found")
    return load_units_spec(path)


def _spec_key(spec) -> str:
    """Stable text identifying a parsed units spec (parts and grammars included)."""
    if spec.kind == "grammar":
        return "grammar\0" + serialize_grammar(spec.grammar)
    parts = "\0".join(_spec_key(q) for q in spec.parts)
    table = None
    if spec.table is not None:
        t = spec.table
        table = (t.elements, t.identity, sorted(t.product.items()), sorted(t.generator_map.items()))
    return repr((spec.kind, spec.generators, sorted(spec.inverse.items()), table,
                 sorted(spec.weights.items()))) + "\0" + parts


def _piece_json(pd: pieces.PieceData) -> dict:
    return {
        "factorizations": [[_w(f) for f in fs] for fs in pd.factorizations],
        "pieces": [_w(d) for d in pd.pieces],
        "partition": [[_w(d) for d in cls] for cls in pd.partition],
        "phi": {_w(d): symbols.render(b) for d, b in pd.table()},
        "certification": pd.certification,
        "budget_limited": pd.budget_limited,
    }


# -- subcommands -----------------------------------------------------------

def cmd_validate(args, rep):
    p = _presentation(args.presentation)
    diags = validate(p, _budget(args))
    rep.set(diagnostics=[{"level": d.level, "message": d.message} for d in diags], valid=True)
    rep.line(f"valid: {p.render()}")
    for d in diags:
        rep.line(str(d))
    return EXIT_YES


def cmd_pieces(args, rep):
    p = _presentation(args.presentation)
    pd = pieces.compute_pieces(p, None, _budget(args))
    rep.set(**_piece_json(pd))
    for fs in pd.factorizations:
        rep.line("factorization: " + "".join(f"({_w(f)})" for f in fs))
    rep.line("Δ = {" + ", ".join(_w(d) for d in pd.pieces) + "}")
    for b, cls in zip(pd.units_alphabet, pd.partition):
        rep.line(f"  {symbols.render(b)}: " + ", ".join(_w(d) for d in cls))
    rep.line(f"Σ(|δ|-1) = {pieces.sigma(pd)}")
    if pd.budget_limited:
        rep.line("warning: some decisions are budget-limited")
        return EXIT_UNKNOWN
    return EXIT_YES


def cmd_normalize(args, rep):
    p = _presentation(args.presentation)
    res = pieces.normalize(p, _budget(args))
    text = serialize_presentation(res.presentation)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    rep.set(presentation=text, new_generators=[symbols.render(g) for g in res.new_generators],
            pieces=[_w(d) for d in res.piece_data.pieces], sigma=pieces.sigma(res.piece_data),
            steps=[{"generator": symbols.render(s.generator), "piece": _w(s.piece),
                    "replaced": _w(s.replaced), "inverse": _w(s.inverse)} for s in res.steps])
    if not args.output:
        rep.line(text.rstrip("\n"))
    for s in res.steps:
        rep.line(f"# {symbols.render(s.generator)} replaces {_w(s.replaced)} inside {_w(s.piece)} "
                 f"(inverse {_w(s.inverse)})")
    rep.line(f"# pieces: {{{', '.join(_w(d) for d in res.piece_data.pieces)}}}, "
             f"Σ(|δ|-1) = {pieces.sigma(res.piece_data)}")
    return EXIT_YES


def cmd_units(args, rep):
    p = _presentation(args.presentation)
    pd = pieces.compute_pieces(p, None, _budget(args))
    up = pieces.units_presentation(pd, p)
    rep.set(units_presentation={"generators": [symbols.render(b) for b in up.alphabet],
                                "relators": [_w(r) for r in up.relators]},
            phi={_w(d): symbols.render(b) for d, b in pd.table()}, budget_limited=pd.budget_limited)
    rep.line(up.render())
    for d, b in pd.table():
        rep.line(f"  φ({_w(d)}) = {symbols.render(b)}")
    return EXIT_UNKNOWN if pd.budget_limited else EXIT_YES


def _normalized(args, rep, p):
    budget = _budget(args)
    pd = pieces.compute_pieces(p, None, budget)
    if pieces.is_normalized(pd):
        return p, pd
    res = pieces.normalize(p, budget)
    names = [symbols.render(g) for g in res.new_generators]
    rep.set(normalized=True, new_generators=names)
    print(f"note: presentation normalized; alphabet extended by {' '.join(names)}", file=sys.stderr)
    return res.presentation, res.piece_data


def _cache_path(args, p, spec_text):
    key = hashlib.sha256("\0".join([__version__, serialize_presentation(p), spec_text]).encode()).hexdigest()[:20]
    return Path(args.presentation).resolve().parent / ".smcache" / f"wp-{key}.cfg"


def _artifacts(args, rep):
    p0 = _presentation(args.presentation)
    spec = _units_spec(args.units)
    spec_text = _spec_key(spec)
    p, pd = _normalized(args, rep, p0)
    cache = None if args.no_cache else _cache_path(args, p, spec_text)
    if cache is not None and cache.exists():
        try:
            wp = parse_grammar(cache.read_text(encoding="utf-8"), "WP(cached)")
            arts = pipeline.PipelineArtifacts(p, pd, wp=wp,
                                              provenance={"cached": True, "budget_limited": pd.budget_limited})
            return arts
        except GrammarSyntaxError:
            pass
    arts = pipeline.synthesize(p, spec, _budget(args), pd)
    if cache is not None:
        try:
            cache.parent.mkdir(exist_ok=True)
            cache.write_text(serialize_grammar(arts.wp), encoding="utf-8")
        except OSError:
            pass
    return arts


def _flag(rep, arts):
    if arts.budget_limited:
        rep.set(warning="budget-limited piece data")
        print("warning: piece data is budget-limited", file=sys.stderr)


def cmd_wp_grammar(args, rep):
    arts = _artifacts(args, rep)
    text = serialize_grammar(arts.wp)
    Path(args.output).write_text(text, encoding="utf-8")
    rep.set(output=args.output, nonterminals=len(arts.wp.productions),
            productions=sum(map(len, arts.wp.productions.values())))
    rep.line(f"wrote {args.output}: {len(arts.wp.productions)} nonterminals")
    _flag(rep, arts)
    return EXIT_YES


def cmd_decide(args, rep):
    arts = _artifacts(args, rep)
    u = _word(args.u, arts.alphabet, "u")
    v = _word(args.v, arts.alphabet, "v")
    ans = pipeline.decide(arts, u, v)
    rep.set(u=_w(u), v=_w(v), equal=ans, verdict="equal" if ans else "not_equal")
    rep.line("equal" if ans else "not equal")
    _flag(rep, arts)
    return EXIT_YES if ans else EXIT_NO


def cmd_invertible(args, rep):
    arts = _artifacts(args, rep)
    w = _word(args.w, arts.alphabet)
    ans = pipeline.is_invertible_cf(arts, w)
    rep.set(word=_w(w), invertible=ans, verdict="yes" if ans else "no")
    rep.line("invertible" if ans else "not invertible")
    _flag(rep, arts)
    return EXIT_YES if ans else EXIT_NO


def cmd_ratmem(args, rep):
    arts = _artifacts(args, rep)
    w = _word(args.w, arts.alphabet)
    ans = pipeline.rational_member(arts, w, args.regex)
    rep.set(word=_w(w), regex=args.regex, member=ans, verdict="yes" if ans else "no")
    rep.line("member" if ans else "not a member")
    _flag(rep, arts)
    return EXIT_YES if ans else EXIT_NO


def cmd_class(args, rep):
    arts = _artifacts(args, rep)
    w = _word(args.w, arts.alphabet)
    if args.maxlen < 0:
        raise UsageError("--maxlen must be non-negative")
    g = pipeline.rep_word_grammar(arts, w)
    words = sorted(language_slice(g, args.maxlen), key=lambda x: (len(x), x))
    sl = oracle.class_enum(arts.presentation, w, args.maxlen, _budget(args))
    agrees = None
    if sl.complete:
        agrees = set(words) == set(sl.words)
    rep.set(word=_w(w), maxlen=args.maxlen, words=[_w(x) for x in words], oracle_complete=sl.complete,
            oracle_agrees=agrees)
    for x in words:
        rep.line(_w(x) or "ε")
    if agrees is False:
        rep.line("warning: grammar and oracle disagree")
        return EXIT_UNKNOWN
    _flag(rep, arts)
    return EXIT_YES


def _parse_rules(text: str, base: Path):
    fams = []
    alphabet = set()
    finite: dict[str, set] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("//"):
            continue
        key, _, rest = line.partition(":")
        if key == "alphabet":
            alphabet |= set(symbols.parse_word("".join(rest.split())))
            continue
        if key not in ("rule", "rule-grammar") or "->" not in rest:
            raise UsageError(f"rules line {lineno}: expected 'rule: <lhs> -> <rhs>' or 'rule-grammar: <path> -> <rhs>'")
        lhs, _, rhs = rest.partition("->")
        rhs = symbols.parse_word(rhs.strip())
        if key == "rule":
            word = symbols.parse_word(lhs.strip())
            finite.setdefault(rhs, set()).add(word)
            alphabet |= set(word) | set(rhs)
        else:
            g = parse_grammar(_read(base / lhs.strip()), "rule-grammar")
            fams.append(RuleFamily(rhs, g))
            alphabet |= set(g.terminals) | set(rhs)
    fams = [RuleFamily(r, frozenset(ws)) for r, ws in finite.items()] + fams
    return MonadicSystemSpec(frozenset(alphabet), tuple(fams))


def cmd_ancestors(args, rep):
    seed = parse_grammar(_read(args.grammar), "seed")
    sys_ = _parse_rules(_read(args.rules), Path(args.rules).resolve().parent)
    g = ancestors(seed, sys_)
    text = serialize_grammar(g)
    Path(args.output).write_text(text, encoding="utf-8")
    rep.set(output=args.output, nonterminals=len(g.productions), empty=is_empty(g))
    rep.line(f"wrote {args.output}: {len(g.productions)} nonterminals")
    return EXIT_YES


def cmd_oracle(args, rep):
    p = _presentation(args.presentation)
    u = _word(args.u, p.alphabet, "u")
    v = _word(args.v, p.alphabet, "v")
    res = oracle.equal(p, u, v, _budget(args))
    rep.set(u=_w(u), v=_w(v), verdict=res.verdict.value, method=res.method,
            trace=None if res.trace is None else [_w(x) for x in res.trace])
    rep.line(res.verdict.value.replace("_", " ") + f" ({res.method})")
    if res.trace:
        rep.line("  " + " ↔ ".join(_w(x) or "ε" for x in res.trace))
    return {oracle.Verdict.EQUAL: EXIT_YES, oracle.Verdict.NOT_EQUAL: EXIT_NO}.get(res.verdict, EXIT_UNKNOWN)


def cmd_classify(args, rep):
    p = _presentation(args.presentation)
    res = pipeline.classify_regular(p, None, _budget(args))
    rep.set(classification=res)
    rep.line(res)
    return {pipeline.Classification.FINITE_GROUP: EXIT_YES,
            pipeline.Classification.NOT_FINITE_GROUP: EXIT_NO}.get(res, EXIT_UNKNOWN)


def _common(suppress: bool) -> argparse.ArgumentParser:
    """Global options, accepted before or after the subcommand."""
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default=d("text"))
    common.add_argument("--max-length", type=int, default=d(None), help="oracle intermediate word length cap")
    common.add_argument("--max-states", type=int, default=d(None), help="oracle visited-state cap")
    common.add_argument("--max-rules", type=int, default=d(None), help="completion rule cap")
    common.add_argument("-v", "--verbose", action="store_true", default=d(False))
    return common


def make_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="special-monoid", description=__doc__.splitlines()[0], parents=[_common(False)])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _common(True)

    def add(name, fn, *pos, units=False, output=False, help=None):
        sp = sub.add_parser(name, parents=[common], help=help)
        for pname in pos:
            sp.add_argument(pname)
        if units:
            sp.add_argument("--units", required=True, help="units spec file (or the word 'trivial')")
            sp.add_argument("--no-cache", action="store_true", help="do not read or write the grammar cache")
        if output:
            sp.add_argument("-o", "--output", required=name != "normalize")
        sp.set_defaults(func=fn)
        return sp

    add("validate", cmd_validate, "presentation", help="check a presentation file")
    add("pieces", cmd_pieces, "presentation", help="factorizations, Δ and φ")
    add("normalize", cmd_normalize, "presentation", output=True, help="piece-in-piece normalization")
    add("units", cmd_units, "presentation", help="group-of-units presentation")
    add("wp-grammar", cmd_wp_grammar, "presentation", units=True, output=True, help="write the WP grammar")
    add("decide", cmd_decide, "presentation", "u", "v", units=True, help="decide u = v")
    add("invertible", cmd_invertible, "presentation", "w", units=True, help="is w invertible?")
    sp = add("ratmem", cmd_ratmem, "presentation", "w", units=True, help="rational subset membership")
    sp.add_argument("--regex", required=True)
    sp = add("class", cmd_class, "presentation", "w", units=True, help="congruence class slice")
    sp.add_argument("--maxlen", type=int, required=True)
    add("ancestors", cmd_ancestors, "grammar", "rules", output=True, help="monadic ancestors of a grammar")
    add("oracle", cmd_oracle, "presentation", "u", "v", help="brute-force equality")
    add("classify", cmd_classify, "presentation", help="finite-group (regular WP) diagnostic")
    return ap


def run(argv=None, out=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    rep = Reporter(args.format, out)
    rep.set(command=args.command)
    try:
        code = args.func(args, rep)
    except (UsageError, PresentationError, GrammarSyntaxError, UnitsSpecError, RegexError,
            MonadicSpecError, PresentationNotNormalized, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        code = EXIT_ERROR
        rep.set(error=str(e))
        rep.lines.clear()
    except BudgetExhausted as e:
        print(f"budget exhausted: {e}", file=sys.stderr)
        code = EXIT_UNKNOWN
        rep.set(verdict="unknown", error=str(e))
        rep.lines.clear()
    rep.set(exit_code=code)
    rep.flush()
    return code


def main():  # pragma: no cover
    sys.exit(run())


if __name__ == "__main__":  # pragma: no cover
    main()
