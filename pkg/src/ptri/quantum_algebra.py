"""Root-of-unity quantum data for the state sum.

Everything is scalar: colors are the integers I = {0, ..., r-2}, each
self-dual, quantum integers come from a primitive 4r-th root of unity
a = exp(2*pi*i*c / 4r) with gcd(c, 4r) = 1, and the normalized 6j-symbols are
complex numbers. The square root choices entering the 6j normalization are
cached per unordered triple and fixed for the lifetime of a QuantumParams, so
repeated evaluations are bit-identical.
"""
from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field

from .errors import ColorOutOfRange

#: upper bound on |I|^6 for eager full-table warmup
_TABLE_CAP = 1_000_000


def _check_color(p: "QuantumParams", i: int) -> None:
    if not (0 <= i <= p.r - 2):
        raise ColorOutOfRange(f"color {i} not in 0..{p.r - 2}")


@dataclass
class QuantumParams:
    """Level r >= 2, root exponent c coprime to 4r, comparison tolerance."""

    r: int
    root_exponent: int = 1
    tol: float = 1e-9
    _qint: list = field(default_factory=list, repr=False)
    _qfact: list = field(default_factory=list, repr=False)
    _sqrt_choices: dict = field(default_factory=dict, repr=False)
    _sixj_table: dict = field(default_factory=dict, repr=False)
    _sixj_flat: object = field(default=None, repr=False)

    def __post_init__(self):
        if self.r < 2:
            raise ValueError("level r must be >= 2")
        if math.gcd(self.root_exponent, 4 * self.r) != 1:
            raise ValueError("root exponent must be coprime to 4r")
        r, c = self.r, self.root_exponent
        # [n] = (a^2n - a^-2n)/(a^2 - a^-2) = sin(pi n c / r)/sin(pi c / r): real.
        denom = math.sin(math.pi * c / r)
        self._qint = [math.sin(math.pi * n * c / r) / denom for n in range(2 * r + 2)]
        self._qfact = [1.0]
        for n in range(1, 2 * r + 2):
            self._qfact.append(self._qfact[-1] * self._qint[n])

    # --- elementary quantities -------------------------------------------

    @property
    def colors(self) -> range:
        return range(self.r - 1)

    @property
    def root(self) -> complex:
        return cmath.exp(2j * math.pi * self.root_exponent / (4 * self.r))

    def qint(self, n: int) -> complex:
        """Quantum integer [n]; [0] = 0, [1] = 1, [r] = 0."""
        if 0 <= n < len(self._qint):
            return complex(self._qint[n])
        denom = math.sin(math.pi * self.root_exponent / self.r)
        return complex(math.sin(math.pi * n * self.root_exponent / self.r) / denom)

    def qfact(self, n: int) -> complex:
        """Quantum factorial [n]! = [1][2]...[n], with [0]! = 1."""
        if n < 0:
            raise ValueError("quantum factorial of a negative integer")
        if n < len(self._qfact):
            return complex(self._qfact[n])
        return 0j  # beyond 2r+1 every product contains a vanishing [kr]

    def qdim(self, i: int) -> complex:
        """Quantum dimension (-1)^i [i+1] of the i-th simple object."""
        _check_color(self, i)
        v = self._qint[i + 1]
        return complex(-v if i % 2 else v)

    def rank_squared(self) -> complex:
        """D^2 = -2r (a^2 - a^-2)^-2, equal to the sum of squared dimensions."""
        a2 = cmath.exp(1j * math.pi * self.root_exponent / self.r)
        return -2 * self.r / (a2 - 1 / a2) ** 2

    def admissible(self, i: int, j: int, k: int) -> bool:
        """Strict admissibility: even sum, triangle inequality, sum <= 2r-4."""
        return (
            (i + j + k) % 2 == 0
            and abs(i - j) <= k <= i + j
            and i + j + k <= 2 * self.r - 4
        )

    # --- 6j-symbols --------------------------------------------------------

    def _gamma(self, i: int, j: int, k: int) -> float:
        """Theta-like normalizer of an admissible triple (real, nonzero)."""
        f = self._qfact
        T = (i + j + k) // 2
        al = (i + j - k) // 2
        be = (i + k - j) // 2
        ga = (j + k - i) // 2
        val = f[T + 1] * f[al] * f[be] * f[ga] / (f[i] * f[j] * f[k])
        return -val if T % 2 else val

    def _gamma_sqrt(self, i: int, j: int, k: int) -> complex:
        """Fixed square root of the normalizer, cached per unordered triple."""
        key = tuple(sorted((i, j, k)))
        g = self._sqrt_choices.get(key)
        if g is None:
            g = cmath.sqrt(complex(self._gamma(*key)))
            self._sqrt_choices[key] = g
        return g

    def _angle(self, i: int, j: int, k: int) -> complex:
        f = self._qfact
        al = (i + j - k) // 2
        be = (i + k - j) // 2
        ga = (j + k - i) // 2
        return f[al] * f[be] * f[ga] / self._gamma_sqrt(i, j, k)

    def _sixj_raw(self, i, j, k, l, m, n) -> complex:
        adm = self.admissible
        if not (adm(i, j, k) and adm(i, m, n) and adm(j, l, n) and adm(k, l, m)):
            return 0j
        f = self._qfact
        T = (
            (i + j + k) // 2,
            (i + m + n) // 2,
            (j + l + n) // 2,
            (k + l + m) // 2,
        )
        Q = ((i + j + l + m) // 2, (j + k + m + n) // 2, (i + k + l + n) // 2)
        pref = (
            self._angle(i, j, k)
            * self._angle(i, m, n)
            * self._angle(j, l, n)
            * self._angle(k, l, m)
            / (f[i] * f[j] * f[k] * f[l] * f[m] * f[n])
        )
        total = 0.0
        # Admissibility keeps every bracket below r inside this z-range, so no
        # denominator vanishes; summands with z >= r-1 vanish via [z+1]!.
        for z in range(max(T), min(min(Q), self.r - 2) + 1):
            den = (
                f[z - T[0]] * f[z - T[1]] * f[z - T[2]] * f[z - T[3]]
                * f[Q[0] - z] * f[Q[1] - z] * f[Q[2] - z]
            )
            term = f[z + 1] / den
            total += -term if z % 2 else term
        return pref * total

    def ensure_tables(self) -> None:
        """Populate the full 6j memo table (and all square-root choices)."""
        if self._sixj_flat is not None:
            return
        B = self.r - 1
        if B ** 6 > _TABLE_CAP:
            self._sixj_flat = False  # fall back to the per-key dict
            return
        flat = [0j] * (B ** 6)
        idx = 0
        for i in range(B):
            for j in range(B):
                for k in range(B):
                    if not self.admissible(i, j, k):
                        idx += B ** 3
                        continue
                    for l in range(B):
                        for m in range(B):
                            if not self.admissible(k, l, m):
                                idx += B
                                continue
                            for n in range(B):
                                flat[idx] = self._sixj_raw(i, j, k, l, m, n)
                                idx += 1
        self._sixj_flat = flat

    def sixj_array(self):
        """Flat complex table indexed by ((((i*B+j)*B+k)*B+l)*B+m)*B+n."""
        self.ensure_tables()
        if self._sixj_flat is False:
            raise OverflowError("full 6j table too large for this level")
        return self._sixj_flat

    def sixj(self, i, j, k, l, m, n) -> complex:
        """Normalized 6j-symbol; zero unless all four face triples
        (i,j,k), (i,m,n), (j,l,n), (k,l,m) are strictly admissible."""
        for x in (i, j, k, l, m, n):
            _check_color(self, x)
        self.ensure_tables()
        if self._sixj_flat is not False:
            B = self.r - 1
            return self._sixj_flat[((((i * B + j) * B + k) * B + l) * B + m) * B + n]
        key = (i, j, k, l, m, n)
        v = self._sixj_table.get(key)
        if v is None:
            v = self._sixj_raw(*key)
            self._sixj_table[key] = v
        return v


def tetra_symmetry_images(key):
    """The 24 relabelings of a 6j key induced by the tetrahedron symmetries:
    permutations of the opposite-pair columns (i,l), (j,m), (k,n) and flips of
    exactly two columns."""
    i, j, k, l, m, n = key
    cols = ((i, l), (j, m), (k, n))
    out = []
    import itertools

    for perm in itertools.permutations(range(3)):
        c = [cols[p] for p in perm]
        for flips in ((0, 0, 0), (1, 1, 0), (1, 0, 1), (0, 1, 1)):
            cc = [(x[1], x[0]) if fl else x for x, fl in zip(c, flips)]
            out.append((cc[0][0], cc[1][0], cc[2][0], cc[0][1], cc[1][1], cc[2][1]))
    return out


@dataclass
class PentagonReport:
    samples: int
    degenerate: int
    max_deviation: float


def verify_pentagon(p: QuantumParams, samples: int, seed: int) -> PentagonReport:
    """Numerically check the local 2-3 move identity.

    Two tetrahedra ABCD, A'BCD share the face BCD; for fixed boundary colors
    the product of their weights must equal the sum over the color of the new
    edge AA' of qdim times the product of the three weights of AA'BC, AA'BD,
    AA'CD. This is the identity the move invariance theorem consumes.
    """
    rng = random.Random(seed)
    B = p.r - 1

    def w(colors):  # tet labeled (s0,s1,s2,s3): key from edges per convention
        ab, ac, ad, bc, bd, cd = colors
        return p.sixj(ab, bc, ac, cd, ad, bd)

    max_dev = 0.0
    degenerate = 0
    done = 0
    attempts = 0
    while done < samples and attempts < 1000 * max(samples, 1):
        attempts += 1
        # boundary edges: AB, AC, AD, A'B, A'C, A'D, BC, BD, CD
        eAB, eAC, eAD, fAB, fAC, fAD, eBC, eBD, eCD = (
            rng.randrange(B) for _ in range(9)
        )
        faces = (
            (eAB, eAC, eBC), (eAB, eAD, eBD), (eAC, eAD, eCD),
            (fAB, fAC, eBC), (fAB, fAD, eBD), (fAC, fAD, eCD),
            (eBC, eBD, eCD),
        )
        if not all(p.admissible(*tr) for tr in faces):
            continue
        done += 1
        lhs = w((eAB, eAC, eAD, eBC, eBD, eCD)) * w((fAB, fAC, fAD, eBC, eBD, eCD))
        # the three new tetrahedra, each labeled (A, A', X, Y)
        rhs = 0j
        for c in range(B):
            t1 = w((c, eAB, eAC, fAB, fAC, eBC))
            t2 = w((c, eAB, eAD, fAB, fAD, eBD))
            t3 = w((c, eAC, eAD, fAC, fAD, eCD))
            rhs += p.qdim(c) * t1 * t2 * t3
        dev = abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))
        if abs(lhs) < p.tol and abs(rhs) < p.tol:
            degenerate += 1
        max_dev = max(max_dev, dev)
    return PentagonReport(done, degenerate, max_dev)
