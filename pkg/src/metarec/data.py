"""MovieLens loading and deterministic splitting.

Supports the two classic MovieLens releases:

* ``ml100k`` -- ``u.data`` (tab-separated), ``u.item`` / ``u.user``
  (pipe-separated), plus the ``u.genre`` / ``u.occupation`` vocabulary
  files shipped with the dataset.
* ``ml1m`` -- ``ratings.dat`` / ``users.dat`` / ``movies.dat`` with
  literal ``::`` separators.

All randomness (splits, folds) is driven by numpy's PCG64 generator, so
a given seed reproduces the exact same partitions on any platform.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

DATASET_NAMES = ("ml100k", "ml1m")

# users.dat occupation codes, in code order (ml-1m README).
ML1M_OCCUPATIONS = (
    "other", "academic/educator", "artist", "clerical/admin",
    "college/grad student", "customer service", "doctor/health care",
    "executive/managerial", "farmer", "homemaker", "K-12 student",
    "lawyer", "programmer", "retired", "sales/marketing", "scientist",
    "self-employed", "technician/engineer", "tradesman/craftsman",
    "unemployed", "writer",
)

# movies.dat genre vocabulary, in README order (18 entries).
ML1M_GENRES = (
    "Action", "Adventure", "Animation", "Children's", "Comedy", "Crime",
    "Documentary", "Drama", "Fantasy", "Film-Noir", "Horror", "Musical",
    "Mystery", "Romance", "Sci-Fi", "Thriller", "War", "Western",
)

_MONTHS = {m: i + 1 for i, m in enumerate(
    ["Jan", "Feb", "Mar", "Apr", "May", "Jun",
     "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"])}


class DataError(Exception):
    """Raised for missing files, malformed lines and integrity failures."""


class MalformedLineError(DataError):
    def __init__(self, path, lineno, raw, reason):
        self.path = str(path)
        self.lineno = lineno
        self.raw = raw
        self.reason = reason
        super().__init__(f"{path}:{lineno}: {reason}: {raw!r}")


@dataclass(frozen=True)
class Rating:
    user_id: int
    item_id: int
    value: float
    timestamp: int = 0


@dataclass(frozen=True)
class UserProfile:
    user_id: int
    age: int
    gender: str          # "M" or "F"
    occupation: str
    zip_code: str = ""


@dataclass(frozen=True)
class ItemProfile:
    item_id: int
    title: str
    release_year: int | None
    genres: frozenset[str]


@dataclass
class RatingDataset:
    """An in-memory MovieLens dataset with profile lookups.

    ``occupation_vocab`` and ``genre_vocab`` preserve the order the
    vocabularies ship in, so feature layouts are reproducible.
    """

    name: str
    ratings: list[Rating]
    users: dict[int, UserProfile]
    items: dict[int, ItemProfile]
    occupation_vocab: tuple[str, ...] = ()
    genre_vocab: tuple[str, ...] = ()

    def __post_init__(self):
        seen = set()
        for i, r in enumerate(self.ratings):
            if r.user_id not in self.users:
                raise DataError(f"rating {i}: unknown user {r.user_id}")
            if r.item_id not in self.items:
                raise DataError(f"rating {i}: unknown item {r.item_id}")
            key = (r.user_id, r.item_id)
            if key in seen:
                raise DataError(f"duplicate rating for user/item pair {key}")
            seen.add(key)

    def __len__(self):
        return len(self.ratings)


@dataclass(frozen=True)
class SplitPlan:
    """Disjoint index partitions over a dataset's rating list."""

    seed: int
    partitions: tuple[np.ndarray, ...]

    def __post_init__(self):
        total = np.concatenate([p for p in self.partitions]) if self.partitions else np.array([], dtype=np.int64)
        if len(np.unique(total)) != len(total):
            raise ValueError("partitions overlap")


def _fields(line, sep, n, path, lineno, raw):
    parts = line.split(sep)
    if len(parts) != n:
        raise MalformedLineError(path, lineno, raw, f"expected {n} fields, got {len(parts)}")
    return parts


def _read_lines(path: Path):
    if not path.exists():
        raise DataError(f"missing file: {path}")
    with open(path, encoding="latin-1") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\r\n")
            if line:
                yield lineno, line


def _parse_int(text, what, path, lineno, raw):
    try:
        return int(text)
    except ValueError:
        raise MalformedLineError(path, lineno, raw, f"non-integer {what}") from None


def _parse_rating_value(text, path, lineno, raw):
    value = _parse_int(text, "rating", path, lineno, raw)
    if value not in (1, 2, 3, 4, 5):
        raise MalformedLineError(path, lineno, raw, f"rating {value} outside 1-5 scale")
    return value


def _load_ml100k(root: Path) -> RatingDataset:
    users = {}
    path = root / "u.user"
    for lineno, line in _read_lines(path):
        uid, age, gender, occupation, zip_code = _fields(line, "|", 5, path, lineno, line)
        if gender not in ("M", "F"):
            raise MalformedLineError(path, lineno, line, f"bad gender {gender!r}")
        users[_parse_int(uid, "user id", path, lineno, line)] = UserProfile(
            user_id=int(uid), age=_parse_int(age, "age", path, lineno, line),
            gender=gender, occupation=occupation, zip_code=zip_code)

    genre_vocab = _read_vocab(root / "u.genre")
    occupation_vocab = _read_vocab(root / "u.occupation")

    items = {}
    path = root / "u.item"
    for lineno, line in _read_lines(path):
        parts = line.split("|")
        min_fields = 5 + (len(genre_vocab) or 19)
        if len(parts) < min_fields:
            raise MalformedLineError(path, lineno, line, "too few fields")
        iid = _parse_int(parts[0], "item id", path, lineno, line)
        flags = parts[5:]
        if genre_vocab and len(flags) != len(genre_vocab):
            raise MalformedLineError(
                path, lineno, line,
                f"expected {len(genre_vocab)} genre flags, got {len(flags)}")
        if not genre_vocab:
            genre_vocab = tuple(f"genre_{i}" for i in range(len(flags)))
        genres = frozenset(
            genre_vocab[i] for i, f in enumerate(flags) if f == "1")
        items[iid] = ItemProfile(
            item_id=iid, title=parts[1],
            release_year=_parse_release_date(parts[2], path, lineno, line),
            genres=genres)

    ratings = []
    path = root / "u.data"
    for lineno, line in _read_lines(path):
        uid, iid, value, ts = _fields(line, "\t", 4, path, lineno, line)
        ratings.append(Rating(
            user_id=_parse_int(uid, "user id", path, lineno, line),
            item_id=_parse_int(iid, "item id", path, lineno, line),
            value=_parse_rating_value(value, path, lineno, line),
            timestamp=_parse_int(ts, "timestamp", path, lineno, line)))

    if not occupation_vocab:
        occupation_vocab = tuple(sorted({u.occupation for u in users.values()}))
    return RatingDataset("ml100k", ratings, users, items,
                         occupation_vocab, genre_vocab)


def _read_vocab(path: Path) -> tuple[str, ...]:
    if not path.exists():
        return ()
    out = []
    for _, line in _read_lines(path):
        name = line.split("|")[0].strip()
        if name:
            out.append(name)
    return tuple(out)


def _parse_release_date(text, path, lineno, raw):
    if not text.strip():
        return None
    m = re.fullmatch(r"(\d{1,2})-([A-Za-z]{3})-(\d{4})", text.strip())
    if m is None or m.group(2) not in _MONTHS:
        raise MalformedLineError(path, lineno, raw, f"bad release date {text!r}")
    return int(m.group(3))


def _load_ml1m(root: Path) -> RatingDataset:
    users = {}
    path = root / "users.dat"
    for lineno, line in _read_lines(path):
        uid, gender, age, occ, zip_code = _fields(line, "::", 5, path, lineno, line)
        if gender not in ("M", "F"):
            raise MalformedLineError(path, lineno, line, f"bad gender {gender!r}")
        occ_code = _parse_int(occ, "occupation", path, lineno, line)
        if not 0 <= occ_code < len(ML1M_OCCUPATIONS):
            raise MalformedLineError(path, lineno, line, f"occupation code {occ_code} out of range")
        users[_parse_int(uid, "user id", path, lineno, line)] = UserProfile(
            user_id=int(uid), age=_parse_int(age, "age", path, lineno, line),
            gender=gender, occupation=ML1M_OCCUPATIONS[occ_code],
            zip_code=zip_code)

    items = {}
    path = root / "movies.dat"
    for lineno, line in _read_lines(path):
        iid, title, genre_field = _fields(line, "::", 3, path, lineno, line)
        year = None
        m = re.search(r"\((\d{4})\)\s*$", title)
        if m:
            year = int(m.group(1))
        genres = frozenset(g for g in genre_field.split("|") if g)
        unknown = genres - set(ML1M_GENRES)
        if unknown:
            raise MalformedLineError(path, lineno, line, f"unknown genres {sorted(unknown)}")
        items[_parse_int(iid, "item id", path, lineno, line)] = ItemProfile(
            item_id=int(iid), title=title, release_year=year, genres=genres)

    ratings = []
    path = root / "ratings.dat"
    for lineno, line in _read_lines(path):
        uid, iid, value, ts = _fields(line, "::", 4, path, lineno, line)
        ratings.append(Rating(
            user_id=_parse_int(uid, "user id", path, lineno, line),
            item_id=_parse_int(iid, "item id", path, lineno, line),
            value=_parse_rating_value(value, path, lineno, line),
            timestamp=_parse_int(ts, "timestamp", path, lineno, line)))

    return RatingDataset("ml1m", ratings, users, items,
                         ML1M_OCCUPATIONS, ML1M_GENRES)


def load_movielens(name: str, data_dir) -> RatingDataset:
    """Load the named MovieLens dataset from ``data_dir``.

    Raises :class:`DataError` on missing files and
    :class:`MalformedLineError` (with file, line number and raw text) on
    unparseable content.
    """
    root = Path(data_dir)
    if name == "ml100k":
        return _load_ml100k(root)
    if name == "ml1m":
        return _load_ml1m(root)
    raise ValueError(f"unknown dataset {name!r}; expected one of {DATASET_NAMES}")


def random_split(ds: RatingDataset, fractions, seed: int) -> SplitPlan:
    """Shuffle rating indices (Fisher-Yates via PCG64) and cut at the
    fraction boundaries.

    All partitions except the last are floored in size; the last absorbs
    the remainder.
    """
    if len(ds) == 0:
        raise DataError("cannot split an empty dataset")
    fractions = [float(f) for f in fractions]
    if any(f <= 0 for f in fractions):
        raise ValueError("fractions must be positive")
    if abs(sum(fractions) - 1.0) > 1e-9:
        raise ValueError(f"fractions sum to {sum(fractions)}, expected 1")

    rng = np.random.Generator(np.random.PCG64(seed))
    order = rng.permutation(len(ds)).astype(np.int64)
    parts = []
    start = 0
    for f in fractions[:-1]:
        size = int(len(ds) * f)
        parts.append(order[start:start + size])
        start += size
    parts.append(order[start:])
    return SplitPlan(seed=seed, partitions=tuple(parts))


def kfold(indices, k: int, seed: int) -> SplitPlan:
    """Partition ``indices`` into k shuffled folds of near-equal size.

    Fold sizes differ by at most one; the first ``len(indices) % k``
    folds take the extra element.
    """
    indices = np.asarray(indices, dtype=np.int64)
    if k < 2:
        raise ValueError("k must be >= 2")
    if len(indices) < k:
        raise ValueError(f"cannot make {k} folds from {len(indices)} indices")

    rng = np.random.Generator(np.random.PCG64(seed))
    order = indices[rng.permutation(len(indices))]
    base, extra = divmod(len(order), k)
    folds = []
    start = 0
    for f in range(k):
        size = base + (1 if f < extra else 0)
        folds.append(order[start:start + size])
        start += size
    return SplitPlan(seed=seed, partitions=tuple(folds))
