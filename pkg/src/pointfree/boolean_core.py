"""Finite Boolean algebras as power sets of atoms.

Elements are bitsets over the atoms of a :class:`FiniteBoolAlgebra`.  Meet is
intersection, join is union and ring addition is symmetric difference, so the
Boolean-ring law ``a * a = a`` holds by construction.  Everything is immutable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator, Mapping, Optional

from .errors import AlgebraMismatch, NotAHomomorphism, NotAnIdeal, SizeOverflow

#: default cap on the number of atoms a coproduct may produce
MAX_ATOMS = 2**20


@dataclass(frozen=True, eq=False)
class FiniteBoolAlgebra:
    """The power set of ``atom_count`` atoms with named generator subsets."""

    atom_count: int
    generators: Mapping[Hashable, int] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        if self.atom_count < 0:
            raise ValueError("atom_count must be non-negative")
        full = (1 << self.atom_count) - 1
        for label, bits in self.generators.items():
            if bits & ~full:
                raise ValueError(f"generator {label!r} mentions atoms outside the algebra")
        object.__setattr__(self, "generators", dict(self.generators))

    @classmethod
    def free(cls, labels: Iterable[Hashable]) -> "FiniteBoolAlgebra":
        """Free Boolean algebra on ``labels``: atoms are the 2^k minterms."""
        labels = list(labels)
        k = len(labels)
        gens = {}
        for pos, label in enumerate(labels):
            bits = 0
            for atom in range(2**k):
                if atom >> pos & 1:
                    bits |= 1 << atom
            gens[label] = bits
        return cls(2**k, gens)

    @property
    def generator_labels(self) -> list:
        return list(self.generators)

    @property
    def full_mask(self) -> int:
        return (1 << self.atom_count) - 1

    @property
    def zero(self) -> "BoolElem":
        return BoolElem(self, 0)

    @property
    def one(self) -> "BoolElem":
        return BoolElem(self, self.full_mask)

    def __len__(self) -> int:
        return 2**self.atom_count

    def elem(self, atoms: Iterable[int]) -> "BoolElem":
        bits = 0
        for a in atoms:
            if not 0 <= a < self.atom_count:
                raise ValueError(f"atom {a} outside 0..{self.atom_count - 1}")
            bits |= 1 << a
        return BoolElem(self, bits)

    def atom(self, i: int) -> "BoolElem":
        return self.elem((i,))

    def gen(self, label: Hashable) -> "BoolElem":
        return BoolElem(self, self.generators[label])

    def elements(self) -> Iterator["BoolElem"]:
        for bits in range(2**self.atom_count):
            yield BoolElem(self, bits)

    def atoms(self) -> Iterator["BoolElem"]:
        for i in range(self.atom_count):
            yield BoolElem(self, 1 << i)

    def __repr__(self):
        tag = f" {self.name}" if self.name else ""
        return f"<FiniteBoolAlgebra{tag} atoms={self.atom_count} gens={len(self.generators)}>"


@dataclass(frozen=True)
class BoolElem:
    algebra: FiniteBoolAlgebra
    bits: int

    def _check(self, other: "BoolElem") -> None:
        if not isinstance(other, BoolElem) or other.algebra is not self.algebra:
            raise AlgebraMismatch("operands belong to different algebras")

    def __and__(self, other: "BoolElem") -> "BoolElem":
        self._check(other)
        return BoolElem(self.algebra, self.bits & other.bits)

    def __or__(self, other: "BoolElem") -> "BoolElem":
        self._check(other)
        return BoolElem(self.algebra, self.bits | other.bits)

    def __xor__(self, other: "BoolElem") -> "BoolElem":
        self._check(other)
        return BoolElem(self.algebra, self.bits ^ other.bits)

    def __invert__(self) -> "BoolElem":
        return BoolElem(self.algebra, self.algebra.full_mask & ~self.bits)

    # ring notation: + is symmetric difference, * is meet
    __add__ = __xor__
    __mul__ = __and__

    def __le__(self, other: "BoolElem") -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    def __ge__(self, other: "BoolElem") -> bool:
        return other <= self

    @property
    def atom_set(self) -> frozenset:
        return frozenset(i for i in range(self.algebra.atom_count) if self.bits >> i & 1)

    def is_zero(self) -> bool:
        return self.bits == 0

    def __repr__(self):
        return f"BoolElem({sorted(self.atom_set)})"


def meet(a: BoolElem, b: BoolElem) -> BoolElem:
    return a & b


def join(a: BoolElem, b: BoolElem) -> BoolElem:
    return a | b


def complement(a: BoolElem) -> BoolElem:
    return ~a


def symdiff(a: BoolElem, b: BoolElem) -> BoolElem:
    return a ^ b


def big_join(algebra: FiniteBoolAlgebra, elems: Iterable[BoolElem]) -> BoolElem:
    out = algebra.zero
    for e in elems:
        out = out | e
    return out


def big_meet(algebra: FiniteBoolAlgebra, elems: Iterable[BoolElem]) -> BoolElem:
    out = algebra.one
    for e in elems:
        out = out & e
    return out


@dataclass(frozen=True)
class BoolHom:
    """Homomorphism given by the images of the source atoms.

    A family of atom images defines a homomorphism exactly when the images are
    pairwise disjoint and join to 1 in the target.
    """

    source: FiniteBoolAlgebra
    target: FiniteBoolAlgebra
    atom_images: tuple

    def __post_init__(self):
        if len(self.atom_images) != self.source.atom_count:
            raise NotAHomomorphism("one image per source atom is required")
        seen = 0
        for img in self.atom_images:
            if img & seen:
                raise NotAHomomorphism("atom images overlap")
            seen |= img
        if seen != self.target.full_mask:
            raise NotAHomomorphism("atom images do not cover the target")

    @classmethod
    def from_generator_images(
        cls,
        source: FiniteBoolAlgebra,
        target: FiniteBoolAlgebra,
        images: Mapping[Hashable, BoolElem],
    ) -> "BoolHom":
        """Build the unique homomorphism sending each source generator to ``images[g]``.

        The source generators must separate atoms (each atom is a minterm of
        the generators); otherwise the assignment does not determine a map.
        """
        labels = list(source.generators)
        if set(images) != set(labels):
            raise NotAHomomorphism("images must be given for exactly the source generators")
        signature = {}
        for atom in range(source.atom_count):
            sig = tuple(source.generators[g] >> atom & 1 for g in labels)
            if sig in signature:
                raise NotAHomomorphism("source generators do not separate atoms")
            signature[sig] = atom
        atom_images = [0] * source.atom_count
        for sig, atom in signature.items():
            img = target.full_mask
            for g, bit in zip(labels, sig):
                e = images[g].bits
                img &= e if bit else ~e
            atom_images[atom] = img & target.full_mask
        # minterms not realized in the source must map to 0
        covered = 0
        for img in atom_images:
            covered |= img
        if covered != target.full_mask:
            raise NotAHomomorphism("images violate a relation holding among the generators")
        return cls(source, target, tuple(atom_images))

    @property
    def generator_images(self) -> dict:
        return {g: self(self.source.gen(g)) for g in self.source.generators}

    def __call__(self, a: BoolElem) -> BoolElem:
        if a.algebra is not self.source:
            raise AlgebraMismatch("argument is not in the source algebra")
        bits = 0
        for i, img in enumerate(self.atom_images):
            if a.bits >> i & 1:
                bits |= img
        return BoolElem(self.target, bits)

    def compose(self, other: "BoolHom") -> "BoolHom":
        """``self`` after ``other``."""
        if other.target is not self.source:
            raise AlgebraMismatch("cannot compose: target/source differ")
        return BoolHom(
            other.source,
            self.target,
            tuple(self(BoolElem(self.source, img)).bits for img in other.atom_images),
        )

    def kernel(self) -> "BoolIdeal":
        return BoolIdeal.principal(
            BoolElem(self.source, sum(1 << i for i, img in enumerate(self.atom_images) if img == 0))
        )

    def verify(self) -> bool:
        """Exhaustive check that 0, 1, complement, meet and join are preserved."""
        src = self.source
        if self(src.zero) != self.target.zero or self(src.one) != self.target.one:
            return False
        elems = list(src.elements())
        for a in elems:
            if self(~a) != ~self(a):
                return False
            for b in elems:
                if self(a & b) != self(a) & self(b) or self(a | b) != self(a) | self(b):
                    return False
        return True

    def equals(self, other: "BoolHom") -> bool:
        return (
            self.source is other.source
            and self.target is other.target
            and self.atom_images == other.atom_images
        )


def identity(algebra: FiniteBoolAlgebra) -> BoolHom:
    return BoolHom(algebra, algebra, tuple(1 << i for i in range(algebra.atom_count)))


@dataclass(frozen=True)
class BoolIdeal:
    algebra: FiniteBoolAlgebra
    members: frozenset  # of bitsets

    def __post_init__(self):
        if 0 not in self.members:
            raise NotAnIdeal("0 must belong to an ideal")
        members = self.members
        for a in members:
            # downward closure: every sub-bitset of a
            sub = a
            while True:
                if sub not in members:
                    raise NotAnIdeal("not downward closed")
                if sub == 0:
                    break
                sub = (sub - 1) & a
            for b in members:
                if a | b not in members:
                    raise NotAnIdeal("not closed under joins")

    @classmethod
    def principal(cls, top: BoolElem) -> "BoolIdeal":
        """The downset of ``top``; every ideal of a finite algebra has this form."""
        a = top.bits
        subs = set()
        sub = a
        while True:
            subs.add(sub)
            if sub == 0:
                break
            sub = (sub - 1) & a
        return cls(top.algebra, frozenset(subs))

    @classmethod
    def from_elements(cls, algebra: FiniteBoolAlgebra, elems: Iterable[BoolElem]) -> "BoolIdeal":
        """Validate an explicitly listed member set (raises NotAnIdeal)."""
        bits = set()
        for e in elems:
            if e.algebra is not algebra:
                raise AlgebraMismatch("ideal member from another algebra")
            bits.add(e.bits)
        return cls(algebra, frozenset(bits))

    @property
    def top(self) -> BoolElem:
        t = 0
        for m in self.members:
            t |= m
        return BoolElem(self.algebra, t)

    def __contains__(self, a: BoolElem) -> bool:
        if a.algebra is not self.algebra:
            raise AlgebraMismatch("element from another algebra")
        return a.bits in self.members

    def equivalent(self, a: BoolElem, b: BoolElem) -> bool:
        """``a ~ b`` iff ``a (+) b`` lies in the ideal."""
        return (a ^ b) in self


def quotient_by_ideal(algebra: FiniteBoolAlgebra, ideal: BoolIdeal) -> tuple[FiniteBoolAlgebra, BoolHom]:
    """Return ``(algebra / ideal, canonical surjection)``.

    Atoms below the ideal's top element are killed; the remaining atoms are
    renumbered in order.  Quotienting by the whole algebra yields the
    degenerate one-element algebra (``0 == 1``).
    """
    if ideal.algebra is not algebra:
        raise AlgebraMismatch("ideal belongs to another algebra")
    killed = ideal.top.bits
    survivors = [i for i in range(algebra.atom_count) if not killed >> i & 1]
    index = {atom: k for k, atom in enumerate(survivors)}

    def project(bits: int) -> int:
        out = 0
        for atom, k in index.items():
            if bits >> atom & 1:
                out |= 1 << k
        return out

    gens = {g: project(b) for g, b in algebra.generators.items()}
    q = FiniteBoolAlgebra(len(survivors), gens, name=f"{algebra.name}/I" if algebra.name else "")
    images = tuple((1 << index[i]) if i in index else 0 for i in range(algebra.atom_count))
    return q, BoolHom(algebra, q, images)


@dataclass(frozen=True)
class Coproduct:
    """Tensor coproduct ``A (x) B`` with its two injections."""

    algebra: FiniteBoolAlgebra
    left: FiniteBoolAlgebra
    right: FiniteBoolAlgebra
    inl: BoolHom
    inr: BoolHom

    def tensor(self, a: BoolElem, b: BoolElem) -> BoolElem:
        """``a (x) b = inl(a) & inr(b)``; vanishes when either factor is 0."""
        return self.inl(a) & self.inr(b)

    def copair(self, f: BoolHom, g: BoolHom) -> BoolHom:
        """The unique ``h`` with ``h . inl = f`` and ``h . inr = g``."""
        if f.source is not self.left or g.source is not self.right or f.target is not g.target:
            raise AlgebraMismatch("copair needs homs out of the two factors into one target")
        nb = self.right.atom_count
        images = []
        for i in range(self.left.atom_count):
            for j in range(nb):
                images.append(f.atom_images[i] & g.atom_images[j])
        return BoolHom(self.algebra, f.target, tuple(images))


def coproduct(a: FiniteBoolAlgebra, b: FiniteBoolAlgebra, max_atoms: int = MAX_ATOMS) -> Coproduct:
    """Atoms of the coproduct are pairs ``(i, j)``, numbered ``i * |B| + j``."""
    n = a.atom_count * b.atom_count
    if n > max_atoms:
        raise SizeOverflow(f"coproduct would have {n} atoms (cap {max_atoms})")
    na, nb = a.atom_count, b.atom_count
    row = (1 << nb) - 1

    def left_bits(bits: int) -> int:
        out = 0
        for i in range(na):
            if bits >> i & 1:
                out |= row << (i * nb)
        return out

    col = sum(1 << (i * nb) for i in range(na))

    def right_bits(bits: int) -> int:
        out = 0
        for j in range(nb):
            if bits >> j & 1:
                out |= col << j
        return out

    gens = {("L", g): left_bits(v) for g, v in a.generators.items()}
    gens.update({("R", g): right_bits(v) for g, v in b.generators.items()})
    c = FiniteBoolAlgebra(n, gens)
    inl = BoolHom(a, c, tuple(left_bits(1 << i) for i in range(na)))
    inr = BoolHom(b, c, tuple(right_bits(1 << j) for j in range(nb)))
    return Coproduct(c, a, b, inl, inr)


def all_homs(source: FiniteBoolAlgebra, target: FiniteBoolAlgebra) -> Iterator[BoolHom]:
    """Every homomorphism ``source -> target`` (assign each target atom to a source atom)."""
    if source.atom_count == 0:
        if target.atom_count == 0:
            yield BoolHom(source, target, ())
        return
    for assignment in itertools.product(range(source.atom_count), repeat=target.atom_count):
        images = [0] * source.atom_count
        for t_atom, s_atom in enumerate(assignment):
            images[s_atom] |= 1 << t_atom
        yield BoolHom(source, target, tuple(images))


# -- law suite ----------------------------------------------------------------------

def _laws():
    return {
        # ring structure: + is symmetric difference, * is meet
        "add_assoc": (3, lambda a, b, c: (a + b) + c == a + (b + c)),
        "add_comm": (2, lambda a, b: a + b == b + a),
        "add_zero": (1, lambda a: a + a.algebra.zero == a),
        "add_self_inverse": (1, lambda a: (a + a).is_zero()),
        "mul_assoc": (3, lambda a, b, c: (a * b) * c == a * (b * c)),
        "mul_comm": (2, lambda a, b: a * b == b * a),
        "mul_one": (1, lambda a: a * a.algebra.one == a),
        "idempotent": (1, lambda a: a * a == a),
        "ring_distrib": (3, lambda a, b, c: a * (b + c) == a * b + a * c),
        "join_from_ring": (2, lambda a, b: (a | b) == a + b + a * b),
        "complement_from_ring": (1, lambda a: ~a == a + a.algebra.one),
        # lattice side
        "de_morgan_meet": (2, lambda a, b: ~(a & b) == (~a | ~b)),
        "de_morgan_join": (2, lambda a, b: ~(a | b) == (~a & ~b)),
        "distrib_meet_over_join": (3, lambda a, b, c: a & (b | c) == (a & b) | (a & c)),
        "distrib_join_over_meet": (3, lambda a, b, c: a | (b & c) == (a | b) & (a | c)),
        "absorption": (2, lambda a, b: a & (a | b) == a and a | (a & b) == a),
        "complement": (1, lambda a: (a & ~a).is_zero() and (a | ~a) == a.algebra.one),
        "involution": (1, lambda a: ~~a == a),
        "order_is_meet": (2, lambda a, b: (a <= b) == ((a & b) == a)),
    }


LAWS = _laws()


def check_laws(algebra: FiniteBoolAlgebra, laws: Optional[dict] = None) -> dict[str, int]:
    """Exhaustively test every law on all element tuples; returns failure counts per law."""
    laws = LAWS if laws is None else laws
    elems = list(algebra.elements())
    failures = {}
    for name, (arity, pred) in laws.items():
        bad = sum(1 for tup in itertools.product(elems, repeat=arity) if not pred(*tup))
        failures[name] = bad
    return failures
