import os
from pathlib import Path

import numpy as np
import pytest

OCCUPATIONS = ("artist", "doctor", "educator", "engineer", "other",
               "programmer", "student")
GENRES = ("unknown", "Action", "Adventure", "Comedy", "Crime", "Drama",
          "Horror", "Romance", "Sci-Fi", "Thriller")


def make_ml100k_dir(root: Path, n_users=60, n_items=80, seed=7,
                    density=0.25):
    """Write a small synthetic dataset in the ml-100k file layout.

    Ratings follow a noisy user-bias + item-bias + taste model so CF
    algorithms have real structure to learn.
    """
    root.mkdir(parents=True, exist_ok=True)
    rng = np.random.Generator(np.random.PCG64(seed))

    with open(root / "u.occupation", "w") as fh:
        fh.write("\n".join(OCCUPATIONS) + "\n")
    with open(root / "u.genre", "w") as fh:
        fh.write("".join(f"{g}|{i}\n" for i, g in enumerate(GENRES)))

    with open(root / "u.user", "w") as fh:
        for u in range(1, n_users + 1):
            age = int(rng.integers(18, 70))
            gender = "M" if rng.random() < 0.6 else "F"
            occ = OCCUPATIONS[rng.integers(0, len(OCCUPATIONS))]
            fh.write(f"{u}|{age}|{gender}|{occ}|{u:05d}\n")

    item_genres = {}
    with open(root / "u.item", "w") as fh:
        for i in range(1, n_items + 1):
            year = int(rng.integers(1930, 1999))
            flags = np.zeros(len(GENRES), dtype=int)
            picks = rng.choice(len(GENRES), size=rng.integers(1, 3),
                               replace=False)
            flags[picks] = 1
            item_genres[i] = [GENRES[p] for p in picks]
            date = f"01-Jan-{year}"
            fh.write(f"{i}|Movie {i} ({year})|{date}||http://x/{i}|"
                     + "|".join(map(str, flags)) + "\n")

    user_bias = rng.normal(0, 0.5, n_users)
    item_bias = rng.normal(0, 0.5, n_items)
    u_taste = rng.normal(0, 0.4, (n_users, 3))
    i_taste = rng.normal(0, 0.4, (n_items, 3))
    lines = []
    ts = 880000000
    for u in range(n_users):
        rated = rng.random(n_items) < density
        rated[rng.integers(0, n_items, 5)] = True   # min ratings per user
        for i in np.nonzero(rated)[0]:
            raw = (3.6 + user_bias[u] + item_bias[i]
                   + u_taste[u] @ i_taste[i] + rng.normal(0, 0.4))
            value = int(np.clip(round(raw), 1, 5))
            ts += 13
            lines.append(f"{u + 1}\t{i + 1}\t{value}\t{ts}")
    with open(root / "u.data", "w") as fh:
        fh.write("\n".join(lines) + "\n")
    return root


@pytest.fixture(scope="session")
def ml100k_dir(tmp_path_factory):
    return make_ml100k_dir(tmp_path_factory.mktemp("synth") / "ml-100k")


@pytest.fixture(scope="session")
def dataset(ml100k_dir):
    from metarec import load_movielens
    return load_movielens("ml100k", ml100k_dir)


@pytest.fixture(scope="session")
def train_matrix(dataset):
    from metarec import RatingMatrix, random_split
    plan = random_split(dataset, (0.7, 0.3), seed=11)
    return RatingMatrix.from_dataset(dataset, plan.partitions[0])


def real_data_dir(name="ml100k"):
    """Real MovieLens directory, or None when unavailable.

    Checked in order: $MOVIELENS_DATA_DIR/<subdir>, ./data/<subdir>.
    """
    sub = {"ml100k": "ml-100k", "ml1m": "ml-1m"}[name]
    marker = {"ml100k": "u.data", "ml1m": "ratings.dat"}[name]
    candidates = []
    env = os.environ.get("MOVIELENS_DATA_DIR")
    if env:
        candidates += [Path(env) / sub, Path(env)]
    here = Path(__file__).resolve().parent.parent
    candidates.append(here / "data" / sub)
    for c in candidates:
        if (c / marker).exists():
            return c
    return None
