"""Breadth-first database of optimal braid words, keyed by unitary up to global phase."""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from typing import Optional

from .braid import BraidWord, format_braid, parse_braid
from .circuit import Matrix2, distance, evaluate_exact
from .exact import IDENTITY, ExactUnitary, _sigma_power, braid_to_exact, exact_mul
from .rings import ZOmega

MAGIC = b"FIBDB1"
FORMAT_VERSION = 1
DEFAULT_BUDGET = 12

# right-multiplication alphabet, in the fixed order used by the BFS
GENERATORS: tuple[tuple[int, int], ...] = ((1, 1), (1, -1), (2, 1), (2, -1))

Key = tuple[int, ...]


class BudgetExceeded(ValueError):
    pass


class DatabaseFormatError(ValueError):
    pass


def canonical_key(U: ExactUnitary) -> Key:
    """Phase-independent key ``(u0..u3, v0..v3, k')`` with ``k'`` in ``{0, 1}``.

    ``w^s U[u, v, k] = U[u w^s, v w^s, k + 2s]``, so a shift ``s`` brings ``k``
    into ``{0, 1}``; ``s`` and ``s + 5`` remain, differing by a sign, and the
    sign making ``u`` lexicographically larger wins.
    """
    s = (-(U.k // 2)) % 5
    u, v = U.u.mul_omega(s), U.v.mul_omega(s)
    k = (U.k + 2 * s) % 10
    assert k in (0, 1)
    assert u, "exact unitaries never have u == 0"
    if (-u).coords > u.coords:
        u, v = -u, -v
    return u.coords + v.coords + (k,)


def key_to_exact(key: Key) -> ExactUnitary:
    return ExactUnitary(ZOmega(*key[0:4]), ZOmega(*key[4:8]), key[8])


@dataclass
class OracleDB:
    max_depth: int
    entries: dict[Key, tuple[int, BraidWord]]
    census: list[int]
    version: int = FORMAT_VERSION
    _numeric: Optional[list] = field(default=None, repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.entries)


def build_database(max_depth: int = DEFAULT_BUDGET, budget: int = DEFAULT_BUDGET) -> OracleDB:
    """Enumerate all unitaries reachable with at most ``max_depth`` sigma moves.

    Frontiers are expanded in sorted key order with a fixed generator order, so
    the stored representative words (and the serialized bytes) are deterministic.
    """
    if max_depth < 0:
        raise ValueError("max_depth must be non-negative")
    if max_depth > budget:
        raise BudgetExceeded(f"depth {max_depth} exceeds the configured budget {budget}")
    steps = {g: _sigma_power(*g) for g in GENERATORS}
    root = canonical_key(IDENTITY)
    entries: dict[Key, tuple[int, BraidWord]] = {root: (0, BraidWord())}
    reps: dict[Key, ExactUnitary] = {root: IDENTITY}
    frontier = [root]
    census = [1]
    for depth in range(1, max_depth + 1):
        fresh: list[Key] = []
        for key in sorted(frontier):
            word = entries[key][1]
            U = reps[key]
            for g in GENERATORS:
                V = exact_mul(U, steps[g])
                kv = canonical_key(V)
                if kv in entries:
                    continue
                w = word + BraidWord((g,))
                assert w.sigma_count == depth
                entries[kv] = (depth, w)
                reps[kv] = V
                fresh.append(kv)
        census.append(len(fresh))
        frontier = fresh
    return OracleDB(max_depth, entries, census)


def lookup(U: ExactUnitary, db: OracleDB) -> Optional[BraidWord]:
    hit = db.entries.get(canonical_key(U))
    return None if hit is None else hit[1]


def _numeric_table(db: OracleDB) -> list:
    if db._numeric is None:
        table = []
        for key, (depth, word) in db.entries.items():
            m = evaluate_exact(key_to_exact(key), 53)
            table.append((m.to_complex(), depth, word))
        db._numeric = table
    return db._numeric


def best_approximation(target: Matrix2, db: OracleDB, bits: int = 128) -> tuple[BraidWord, object]:
    """Closest stored word to ``target``; ties go to the shorter, then lexicographically smaller word.

    Candidates are screened in double precision and the near-ties rechecked at
    ``bits``.
    """
    (ta, tb), (tc, td) = target.to_complex()
    scored = []
    for (m, depth, word) in _numeric_table(db):
        (a, b), (c, d) = m
        # tr(M T^dagger)
        tr = a * ta.conjugate() + b * tb.conjugate() + c * tc.conjugate() + d * td.conjugate()
        scored.append((1.0 - abs(tr) / 2, depth, word))
    best = min(s[0] for s in scored)
    near = [(depth, word) for s, depth, word in scored if s <= best + 1e-9]
    refined = []
    for depth, word in near:
        d = distance(evaluate_exact(braid_to_exact(word), bits), target)
        refined.append((d, depth, format_braid(word), word))
    refined.sort(key=lambda r: (r[0], r[1], r[2]))
    d, _, _, word = refined[0]
    return word, d


def census_fit(census: list[int], lo: int = 6, hi: Optional[int] = None) -> tuple[float, float]:
    """Least-squares fit ``log10(count) = intercept + slope * depth`` over ``lo..hi``."""
    import math

    hi = len(census) - 1 if hi is None else hi
    xs = list(range(lo, hi + 1))
    ys = [math.log10(census[x]) for x in xs]
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx
    return my - slope * mx, slope


# -- persistence ----------------------------------------------------------------
#
# header:  magic "FIBDB1", u16 version, u16 max_depth, u32 n_census, n_census * u64
#          u64 n_records
# record:  u32 payload length, payload
# payload: 9 * i64 key, u16 depth, u16 n_runs, n_runs * (u8 gen, i8 exp)

_HEAD = struct.Struct("<HHI")
_KEY = struct.Struct("<9q")


def dumps(db: OracleDB) -> bytes:
    out = [MAGIC, _HEAD.pack(db.version, db.max_depth, len(db.census))]
    out.append(struct.pack(f"<{len(db.census)}Q", *db.census))
    out.append(struct.pack("<Q", len(db.entries)))
    for key in sorted(db.entries):
        depth, word = db.entries[key]
        payload = _KEY.pack(*key) + struct.pack("<HH", depth, len(word.runs))
        payload += b"".join(struct.pack("<Bb", g, e) for g, e in word.runs)
        out.append(struct.pack("<I", len(payload)) + payload)
    return b"".join(out)


def loads(data: bytes) -> OracleDB:
    if not data.startswith(MAGIC):
        raise DatabaseFormatError("missing FIBDB1 magic")
    try:
        pos = len(MAGIC)
        version, max_depth, nc = _HEAD.unpack_from(data, pos)
        if version != FORMAT_VERSION:
            raise DatabaseFormatError(f"unsupported version {version}")
        pos += _HEAD.size
        census = list(struct.unpack_from(f"<{nc}Q", data, pos))
        pos += 8 * nc
        (nrec,) = struct.unpack_from("<Q", data, pos)
        pos += 8
        entries: dict[Key, tuple[int, BraidWord]] = {}
        for _ in range(nrec):
            (length,) = struct.unpack_from("<I", data, pos)
            pos += 4
            payload = data[pos : pos + length]
            if len(payload) != length:
                raise DatabaseFormatError("truncated record")
            pos += length
            key = _KEY.unpack_from(payload, 0)
            depth, nruns = struct.unpack_from("<HH", payload, _KEY.size)
            off = _KEY.size + 4
            runs = tuple(struct.unpack_from("<Bb", payload, off + 2 * i) for i in range(nruns))
            entries[tuple(key)] = (depth, BraidWord(runs))
    except struct.error as exc:
        raise DatabaseFormatError(f"truncated database: {exc}") from exc
    if pos != len(data):
        raise DatabaseFormatError("trailing bytes after last record")
    return OracleDB(max_depth, entries, census, version)


def save(db: OracleDB, path) -> None:
    with open(path, "wb") as fh:
        fh.write(dumps(db))


def load(path) -> OracleDB:
    with open(path, "rb") as fh:
        return loads(fh.read())


def to_json(db: OracleDB) -> str:
    return json.dumps(
        {
            "format": MAGIC.decode(),
            "version": db.version,
            "max_depth": db.max_depth,
            "census": db.census,
            "entries": [
                {"key": list(key), "sigma_count": depth, "braid": format_braid(word)}
                for key, (depth, word) in sorted(db.entries.items())
            ],
        },
        indent=1,
    )


def from_json(text: str) -> OracleDB:
    obj = json.loads(text)
    entries = {
        tuple(e["key"]): (e["sigma_count"], parse_braid(e["braid"])) for e in obj["entries"]
    }
    return OracleDB(obj["max_depth"], entries, obj["census"], obj["version"])
