"""Group-of-units word problem inputs.

A units spec says how to get ``WP_B = {u#v^rev : u =_U v}`` over the units
alphabet ``B``: either a trusted grammar, or one of the builders below,
which first produce the identity language ``Id = {u : u =_U 1}`` and then
derive WP from it with the formal inverse map ``ι``.

File format (``#`` comments, one directive per line)::

    units: trivial | finite | free | integer | free-product | grammar <path>
    generators: b1 b2            # optional sub-alphabet (default: all of B)
    inverse: b1 b2               # free: ι(b1)=b2, ι(b2)=b1; grammar: ι(b1)=b2 only
    elements: e x y              # finite: element names
    identity: e
    map: b1 x                    # finite: generator -> element; integer: generator -> weight
    table:                       # finite: rows of the multiplication table
      e x y
      x y e
      y e x
    part: other.us               # free-product: member spec files
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

from . import symbols
from .errors import UnitsSpecError
from .lang import (Grammar, MonadicSystemSpec, Nfa, RuleFamily, Transducer, ancestors, build,
                   cyk_member, intersect_regular, parse_grammar, rational_transduce,
                   substitute_terminals)
from .symbols import HASH


@dataclass(frozen=True)
class FiniteTable:
    elements: tuple[str, ...]
    identity: str
    product: dict            # (x, y) -> x·y
    generator_map: dict      # b -> element

    def evaluate(self, word: str) -> str:
        g = self.identity
        for b in word:
            g = self.product[g, self.generator_map[b]]
        return g

    def check(self):
        el = self.elements
        if self.identity not in el:
            raise UnitsSpecError("identity is not an element")
        for x in el:
            for y in el:
                if self.product.get((x, y)) not in el:
                    raise UnitsSpecError(f"table entry {x}·{y} missing or not an element")
        for x in el:
            if self.product[self.identity, x] != x or self.product[x, self.identity] != x:
                raise UnitsSpecError(f"{self.identity} is not an identity for {x}")
            if not any(self.product[x, y] == self.identity for y in el):
                raise UnitsSpecError(f"{x} has no inverse")
        for x in el:
            for y in el:
                for z in el:
                    if self.product[self.product[x, y], z] != self.product[x, self.product[y, z]]:
                        raise UnitsSpecError(f"table is not associative at ({x},{y},{z})")
        for b, g in self.generator_map.items():
            if g not in el:
                raise UnitsSpecError(f"{symbols.render(b)} maps to unknown element {g}")


@dataclass(frozen=True)
class UnitsWpSpec:
    kind: str                                   # trivial | finite | free | integer | free-product | grammar
    generators: tuple[str, ...] | None = None   # None: all of B
    inverse: dict = field(default_factory=dict)  # ι: b -> word over B
    table: FiniteTable | None = None
    grammar: Grammar | None = None
    parts: tuple = ()
    weights: dict = field(default_factory=dict)  # integer: b -> image in Z

    def alphabet(self, B) -> tuple[str, ...]:
        if self.generators is not None:
            return self.generators
        if self.kind == "finite" and self.table is not None:
            return tuple(b for b in B if b in self.table.generator_map)
        if self.kind == "free":
            return tuple(b for b in B if b in self.inverse)
        if self.kind == "integer":
            return tuple(b for b in B if b in self.weights)
        if self.kind == "free-product":
            out = []
            for part in self.parts:
                out += [b for b in part.alphabet(B) if b not in out]
            return tuple(out)
        return tuple(B)


# -- parsing ------------------------------------------------------------------

def parse_units_spec(text: str, base: Path | None = None) -> UnitsWpSpec:
    base = base or Path(".")
    kind = None
    path = None
    generators = None
    inverse: dict = {}
    elements = identity = None
    gmap: dict = {}
    rows: list[list[str]] = []
    parts = []
    in_table = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if not sep and in_table:
            rows.append(line.split())
            continue
        in_table = False
        key, rest = key.strip(), rest.strip()
        try:
            if key == "units":
                if kind is not None:
                    raise UnitsSpecError("second 'units:' line")
                kind, _, path = rest.partition(" ")
                kind = kind.strip()
                if kind not in ("trivial", "finite", "free", "integer", "free-product", "grammar"):
                    raise UnitsSpecError(f"unknown units kind {kind!r}")
            elif key == "generators":
                generators = tuple(symbols.parse_units_word(t) for t in rest.split())
            elif key == "inverse":
                toks = rest.split()
                if len(toks) not in (1, 2):
                    raise UnitsSpecError("inverse takes a generator and its inverse word")
                b = symbols.parse_units_word(toks[0])
                if len(b) != 1:
                    raise UnitsSpecError("inverse: first token must be one generator")
                inverse[b] = symbols.parse_units_word(toks[1]) if len(toks) == 2 else ""
            elif key == "elements":
                elements = tuple(rest.split())
            elif key == "identity":
                identity = rest
            elif key == "map":
                b, g = rest.split()
                gmap[symbols.parse_units_word(b)] = g
            elif key == "table":
                in_table = True
                if rest:
                    rows.append(rest.split())
            elif key == "part":
                ppath = (base / rest)
                parts.append(parse_units_spec(ppath.read_text(encoding="utf-8"), ppath.parent))
            else:
                raise UnitsSpecError(f"unknown directive {key!r}")
        except UnitsSpecError as e:
            raise UnitsSpecError(f"line {lineno}: {e}") from None
        except (ValueError, OSError) as e:
            raise UnitsSpecError(f"line {lineno}: {e}") from None
    if kind is None:
        raise UnitsSpecError("missing 'units:' line")
    if kind == "free":
        for b, w in list(inverse.items()):
            if len(w) != 1:
                raise UnitsSpecError("free units need single-letter inverses")
            if inverse.setdefault(w, b) != b:
                raise UnitsSpecError(f"inconsistent pairing for {symbols.render(w)}")
    table = None
    if kind == "finite":
        if elements is None or identity is None:
            raise UnitsSpecError("finite units need 'elements:' and 'identity:'")
        if len(rows) != len(elements) or any(len(r) != len(elements) for r in rows):
            raise UnitsSpecError("table must be square over the listed elements")
        product = {(x, y): rows[i][j] for i, x in enumerate(elements) for j, y in enumerate(elements)}
        table = FiniteTable(elements, identity, product, gmap)
        table.check()
    weights = {}
    if kind == "integer":
        try:
            weights = {b: int(k) for b, k in gmap.items()}
        except ValueError:
            raise UnitsSpecError("integer units map generators to integers") from None
        if not weights:
            raise UnitsSpecError("integer units need 'map:' lines")
    grammar = None
    if kind == "grammar":
        if not path.strip():
            raise UnitsSpecError("'units: grammar' needs a path")
        gpath = base / path.strip()
        grammar = parse_grammar(gpath.read_text(encoding="utf-8"), label="units-wp(file)")
    if kind == "free-product" and not parts:
        raise UnitsSpecError("free product needs at least one 'part:'")
    return UnitsWpSpec(kind, generators, inverse, table, grammar, tuple(parts), weights)


def load_units_spec(path) -> UnitsWpSpec:
    path = Path(path)
    return parse_units_spec(path.read_text(encoding="utf-8"), path.parent)


def trivial() -> UnitsWpSpec:
    return UnitsWpSpec("trivial")


def free(pairs: dict) -> UnitsWpSpec:
    inv = dict(pairs)
    for b, c in pairs.items():
        inv.setdefault(c, b)
    return UnitsWpSpec("free", None, inv)


def finite(elements, identity, rows, generator_map) -> UnitsWpSpec:
    product = {(x, y): rows[i][j] for i, x in enumerate(elements) for j, y in enumerate(elements)}
    t = FiniteTable(tuple(elements), identity, product, dict(generator_map))
    t.check()
    return UnitsWpSpec("finite", None, {}, t)


def integer(weights: dict) -> UnitsWpSpec:
    """The group Z, with generator ``b`` sent to ``weights[b]``."""
    return UnitsWpSpec("integer", None, {}, weights={b: int(k) for b, k in weights.items()})


def cyclic(n: int, generator_map: dict) -> UnitsWpSpec:
    """Z/n with elements ``0..n-1``; ``generator_map`` sends b to a residue."""
    el = [str(i) for i in range(n)]
    rows = [[str((i + j) % n) for j in range(n)] for i in range(n)]
    return finite(el, "0", rows, {b: str(k % n) for b, k in generator_map.items()})


# -- identity languages -------------------------------------------------------

def _finite_inverse_words(t: FiniteTable, gens) -> dict:
    """Shortest generator word for every element (BFS over the Cayley graph)."""
    word = {t.identity: ""}
    queue = deque([t.identity])
    while queue:
        g = queue.popleft()
        for b in gens:
            h = t.product[g, t.generator_map[b]]
            if h not in word:
                word[h] = word[g] + b
                queue.append(h)
    out = {}
    for b in gens:
        g = t.generator_map[b]
        inv = next(y for y in t.elements if t.product[g, y] == t.identity)
        if inv not in word:
            raise UnitsSpecError(f"inverse of {symbols.render(b)} is not generated")
        out[b] = word[inv]
    return out


def _integer_inverse_words(weights: dict, gens) -> dict:
    """A shortest word of weight ``-weights[b]`` for each generator (BFS over Z)."""
    bound = sum(abs(weights[b]) for b in gens) + 1
    word = {0: ""}
    queue = deque([0])
    while queue:
        n = queue.popleft()
        for b in gens:
            m = n + weights[b]
            if abs(m) <= bound and m not in word:
                word[m] = word[n] + b
                queue.append(m)
    out = {}
    for b in gens:
        if -weights[b] not in word:
            raise UnitsSpecError(f"weights do not generate a group: no inverse for {symbols.render(b)}")
        out[b] = word[-weights[b]]
    return out


def identity_language(spec: UnitsWpSpec, B) -> tuple[Grammar, dict]:
    """``(Id, ι)`` for a builder spec over its sub-alphabet of ``B``."""
    gens = spec.alphabet(B)
    if spec.kind == "trivial":
        g = Grammar(0, {0: ((),) + tuple((b, 0) for b in gens)}, gens, "Id(trivial)")
        return g, {b: "" for b in gens}
    if spec.kind == "finite":
        t = spec.table
        idx = {e: i for i, e in enumerate(t.elements)}
        # nonterminal e derives the words u with e·u = 1
        prods = {idx[e]: [] for e in t.elements}
        for e in t.elements:
            for b in gens:
                prods[idx[e]].append((b, idx[t.product[e, t.generator_map[b]]]))
        prods[idx[t.identity]].append(())
        g = build(idx[t.identity], prods, gens, "Id(finite)")
        inv = dict(spec.inverse) or _finite_inverse_words(t, gens)
        return g, inv
    if spec.kind == "free":
        rules = [(b + spec.inverse[b], "") for b in gens]
        g = ancestors([""], MonadicSystemSpec.of(gens, rules), "Id(free)")
        return g, {b: spec.inverse[b] for b in gens}
    if spec.kind == "integer":
        # Id = h^{-1}(balanced words over y, Y) with h(b) = y^k or Y^{-k}
        up, down = symbols.primed(0), symbols.primed(1)
        bal = ancestors([""], MonadicSystemSpec.of((up, down), [(up + down, ""), (down + up, "")]))
        h = {b: (up * k if k > 0 else down * -k) for b, k in ((b, spec.weights[b]) for b in gens)}
        t = Transducer.homomorphism(h, outputs=(up, down))
        g = rational_transduce(bal, t, "preimage").with_terminals(gens).relabel("Id(integer)")
        return g, dict(spec.inverse) or _integer_inverse_words(spec.weights, gens)
    if spec.kind == "free-product":
        members = []
        inv = {}
        for part in spec.parts:
            gid, pinv = identity_language(part, B)
            nonempty = intersect_regular(gid, Nfa.pattern([(set(part.alphabet(B)), False),
                                                           (set(part.alphabet(B)), True)]))
            members.append(RuleFamily("", nonempty))
            inv.update(pinv)
        sys = MonadicSystemSpec(frozenset(gens), tuple(members))
        return ancestors([""], sys, "Id(free product)"), inv
    raise UnitsSpecError(f"no identity-language builder for {spec.kind!r}")


def _primed(b: str) -> str:
    return symbols.primed(symbols.units_index(b))


def wp_from_identity(idl: Grammar, inverse: dict, B) -> Grammar:
    """``WP = unprime(g^{-1}(Id) ∩ B*#B′*)`` with ``g(b)=b, g(#)=ε, g(b′)=ι(b)``."""
    B = tuple(B)
    mapping = {b: b for b in B}
    mapping[HASH] = ""
    for b in B:
        mapping[_primed(b)] = inverse[b]
    t = Transducer.homomorphism(mapping, outputs=B)
    pre = rational_transduce(idl, t, "preimage")
    shaped = intersect_regular(pre, Nfa.pattern([(set(B), True), ({HASH}, False),
                                                 ({_primed(b) for b in B}, True)]))
    unprime = {b: b for b in B}
    unprime[HASH] = HASH
    unprime.update({_primed(b): b for b in B})
    out = substitute_terminals(shaped, unprime, "WP_B")
    return out.with_terminals(set(B) | {HASH})


def units_wp_grammar(spec: UnitsWpSpec, B) -> Grammar:
    """Grammar for ``WP_B`` over ``B ∪ {#}``."""
    B = tuple(B)
    if spec.kind == "grammar":
        g = spec.grammar
        extra = g.terminals - set(B) - {HASH}
        if extra:
            raise UnitsSpecError("units grammar uses symbols outside B ∪ {#}: "
                                 + ", ".join(sorted(map(symbols.render, extra))))
        return g.with_terminals(set(B) | {HASH})
    covered = spec.alphabet(B)
    missing = [b for b in B if b not in covered]
    if missing:
        raise UnitsSpecError("units spec does not cover " + ", ".join(map(symbols.render, missing)))
    unknown = [b for b in covered if b not in B]
    if unknown:
        raise UnitsSpecError("units spec mentions generators outside B: " + ", ".join(map(symbols.render, unknown)))
    idl, inv = identity_language(spec, B)
    for b in B:
        if b not in inv:
            raise UnitsSpecError(f"no formal inverse for {symbols.render(b)}")
        if not cyk_member(idl, b + inv[b]):
            raise UnitsSpecError(f"{symbols.render(b)}·ι({symbols.render(b)}) is not the identity")
    return wp_from_identity(idl, inv, B)
