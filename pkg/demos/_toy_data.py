"""Shared helper for the demo scripts.

Returns the real MovieLens 100K dataset when available (set
MOVIELENS_DATA_DIR or unpack the archive under ./data/ml-100k), and
otherwise generates a small synthetic dataset in the same file layout so
the demos run anywhere in a few seconds.
"""

import os
import tempfile
from pathlib import Path

import numpy as np

from metarec import load_movielens

OCCUPATIONS = ("artist", "doctor", "educator", "engineer", "other",
               "programmer", "student")
GENRES = ("unknown", "Action", "Adventure", "Comedy", "Crime", "Drama",
          "Horror", "Romance", "Sci-Fi", "Thriller")


def _real_dir():
    candidates = []
    env = os.environ.get("MOVIELENS_DATA_DIR")
    if env:
        candidates += [Path(env) / "ml-100k", Path(env)]
    candidates.append(Path(__file__).resolve().parent.parent / "data" / "ml-100k")
    for c in candidates:
        if (c / "u.data").exists():
            return c
    return None


def write_toy_ml100k(root, n_users=80, n_items=100, seed=7, density=0.25):
    """Write a synthetic dataset (noisy bias + taste model) in ml-100k layout."""
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    rng = np.random.Generator(np.random.PCG64(seed))

    (root / "u.occupation").write_text("\n".join(OCCUPATIONS) + "\n")
    (root / "u.genre").write_text(
        "".join(f"{g}|{i}\n" for i, g in enumerate(GENRES)))

    with open(root / "u.user", "w") as fh:
        for u in range(1, n_users + 1):
            age = int(rng.integers(18, 70))
            gender = "M" if rng.random() < 0.6 else "F"
            occ = OCCUPATIONS[rng.integers(0, len(OCCUPATIONS))]
            fh.write(f"{u}|{age}|{gender}|{occ}|{u:05d}\n")

    with open(root / "u.item", "w") as fh:
        for i in range(1, n_items + 1):
            year = int(rng.integers(1930, 1999))
            flags = np.zeros(len(GENRES), dtype=int)
            flags[rng.choice(len(GENRES), size=rng.integers(1, 3),
                             replace=False)] = 1
            fh.write(f"{i}|Movie {i} ({year})|01-Jan-{year}||http://x/{i}|"
                     + "|".join(map(str, flags)) + "\n")

    user_bias = rng.normal(0, 0.5, n_users)
    item_bias = rng.normal(0, 0.5, n_items)
    u_taste = rng.normal(0, 0.4, (n_users, 3))
    i_taste = rng.normal(0, 0.4, (n_items, 3))
    lines = []
    for u in range(n_users):
        rated = rng.random(n_items) < density
        rated[rng.integers(0, n_items, 5)] = True
        for i in np.nonzero(rated)[0]:
            raw = (3.6 + user_bias[u] + item_bias[i]
                   + u_taste[u] @ i_taste[i] + rng.normal(0, 0.4))
            value = int(np.clip(round(raw), 1, 5))
            lines.append(f"{u + 1}\t{i + 1}\t{value}\t880000000")
    (root / "u.data").write_text("\n".join(lines) + "\n")
    return root


def get_dataset():
    """(dataset, label) — real ML-100K when present, else a toy stand-in."""
    real = _real_dir()
    if real is not None:
        return load_movielens("ml100k", real), "MovieLens 100K"
    toy = Path(tempfile.mkdtemp(prefix="metarec_demo_")) / "ml-100k"
    write_toy_ml100k(toy)
    return load_movielens("ml100k", toy), "synthetic toy data"
