"""Writes the complementary two-model fixture.

Model A errs on the PA/NA groups and model B on the PB/NB groups, so each has
accuracy 0.75. Equal weights also miss PA/NA, while any A share in
[0.25, 0.4286) classifies every sample correctly.
"""
import pathlib

HERE = pathlib.Path(__file__).parent

GROUPS = [
    ("PA", "relevant", 5, 0.10, 0.80),
    ("NA", "irrelevant", 5, 0.90, 0.20),
    ("PB", "relevant", 5, 0.80, 0.40),
    ("NB", "irrelevant", 5, 0.10, 0.60),
    ("PP", "relevant", 10, 0.70, 0.75),
    ("NN", "irrelevant", 10, 0.30, 0.25),
]


def rows(prefix):
    out = []
    for name, label, count, a, b in GROUPS:
        for i in range(count):
            jitter = 0.01 * (i % 3)
            out.append((f"{prefix}{name}{i}", label, a + jitter if a < 0.5 else a - jitter, b))
    return out


def accuracy(rows, w):
    hits = sum((w * a + (1 - w) * b >= 0.5) == (label == "relevant") for _, label, a, b in rows)
    return hits / len(rows)


def main():
    labels = []
    for split in ("validation", "test"):
        data = rows("v" if split == "validation" else "t")
        assert accuracy(data, 1.0) == 0.75 and accuracy(data, 0.0) == 0.75 and accuracy(data, 0.5) == 0.75
        best = max(accuracy(data, k / 1000) for k in range(1001))
        assert best == 1.0
        with open(HERE / f"{split}_scores.csv", "w") as f:
            f.write("sample_id,model_a,model_b\n")
            for sid, _, a, b in data:
                f.write(f"{sid},{a:.2f},{b:.2f}\n")
        labels.extend((sid, label) for sid, label, _, _ in data)
    with open(HERE / "labels.csv", "w") as f:
        f.write("sample_id,label\n")
        for sid, label in labels:
            f.write(f"{sid},{label}\n")


if __name__ == "__main__":
    main()
