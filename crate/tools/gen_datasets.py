"""Write the classification CSVs shipped in data/.

iris_binary.csv      first 100 Iris rows (setosa -> -1, versicolor -> +1)
synthetic16.csv      two-Gaussian 16-feature binary set (labels 0/1), 800 rows,
                     features are 4x4 "pixels" in [0, pi], row-major

    python3 tools/gen_datasets.py data
"""
import sys
from pathlib import Path

import numpy as np
from sklearn.datasets import load_iris


def iris(out):
    ds = load_iris()
    x, y = ds.data[:100], ds.target[:100]
    rows = ["sepal_length,sepal_width,petal_length,petal_width,label"]
    for xi, yi in zip(x, y):
        rows.append(",".join(f"{v:.1f}" for v in xi) + ("," + ("+1" if yi == 1 else "-1")))
    (out / "iris_binary.csv").write_text("\n".join(rows) + "\n")


def synthetic(out, n=800, seed=20240607):
    rng = np.random.default_rng(seed)
    mean0 = rng.uniform(0.4, 2.7, size=16)
    mean1 = np.clip(mean0 + rng.normal(0.0, 0.9, size=16), 0.0, np.pi)
    labels = rng.integers(0, 2, size=n)
    means = np.where(labels[:, None] == 1, mean1, mean0)
    x = np.clip(means + rng.normal(0.0, 0.45, size=(n, 16)), 0.0, np.pi)
    rows = [",".join(f"p{i}" for i in range(16)) + ",label"]
    for xi, yi in zip(x, labels):
        rows.append(",".join(f"{v:.5f}" for v in xi) + f",{yi}")
    (out / "synthetic16.csv").write_text("\n".join(rows) + "\n")


if __name__ == "__main__":
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "data")
    out.mkdir(parents=True, exist_ok=True)
    iris(out)
    synthetic(out)
