"""On-disk predictor cache.

One container file per predictor: a JSON header line carrying
{format_version, algorithm_id, hyperparameters, master seed, dataset
fingerprint, array layout}, followed by the parameter arrays as
little-endian float64. An entry is used only when the whole header
matches the requested fit.
"""

from __future__ import annotations

import dataclasses
import json
from pathlib import Path

import numpy as np

from .cf import PREDICTOR_CLASSES, fit_predictor

FORMAT_VERSION = 1


class ModelCache:
    def __init__(self, directory):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.hits = 0
        self.misses = 0

    def _path(self, algorithm, fingerprint):
        return self.directory / f"{algorithm}-{fingerprint[:16]}.mrc"

    def _header(self, algorithm, cfg, fingerprint, arrays=None):
        header = {
            "format_version": FORMAT_VERSION,
            "algorithm_id": algorithm,
            "hyperparameters": {k: v for k, v in dataclasses.asdict(cfg).items()
                                if k != "master_seed"},
            "master_seed": cfg.master_seed,
            "dataset_fingerprint": fingerprint,
        }
        if arrays is not None:
            header["arrays"] = [{"name": n, "shape": list(a.shape)}
                                for n, a in arrays.items()]
        return header

    def store(self, model, train):
        arrays = {n: np.ascontiguousarray(a, dtype=np.float64)
                  for n, a in model.param_arrays().items()}
        fingerprint = train.fingerprint()
        header = self._header(model.algorithm, model.cfg, fingerprint, arrays)
        path = self._path(model.algorithm, fingerprint)
        with open(path, "wb") as fh:
            fh.write(json.dumps(header, sort_keys=True).encode() + b"\n")
            for a in arrays.values():
                fh.write(a.astype("<f8").tobytes())

    def load(self, algorithm, train, cfg):
        """Rebuilt model, or None when absent or header-mismatched."""
        fingerprint = train.fingerprint()
        path = self._path(algorithm, fingerprint)
        if not path.exists():
            return None
        with open(path, "rb") as fh:
            header_line = fh.readline()
            try:
                header = json.loads(header_line)
            except json.JSONDecodeError:
                return None
            layout = header.pop("arrays", None)
            expected = self._header(algorithm, cfg, fingerprint)
            if header != expected or layout is None:
                return None
            arrays = {}
            for spec in layout:
                shape = tuple(spec["shape"])
                n = int(np.prod(shape)) if shape else 1
                buf = fh.read(8 * n)
                if len(buf) != 8 * n:
                    return None
                arrays[spec["name"]] = np.frombuffer(
                    buf, dtype="<f8").reshape(shape).copy()
        cls = PREDICTOR_CLASSES[algorithm]
        return cls.from_arrays(train, cfg, arrays)

    def fit_pool_cached(self, train, cfg, algorithms, threads=1):
        """Like cf.fit_pool, reusing valid cache entries and storing
        fresh fits."""
        from .cf import ALGORITHM_ORDER
        algorithms = tuple(algorithms) if algorithms else ALGORITHM_ORDER
        pool = {}
        for a in algorithms:
            model = self.load(a, train, cfg)
            if model is None:
                self.misses += 1
                model = fit_predictor(a, train, cfg)
                self.store(model, train)
            else:
                self.hits += 1
            pool[a] = model
        return pool
