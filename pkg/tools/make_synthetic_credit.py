"""Generate a deterministic synthetic credit file in the canonical layout.

The real 1000-row credit dataset cannot be fetched from this environment, so
the repo bundles a stand-in with the same shape: 21 space-delimited columns,
A-coded categoricals, 700 good / 300 bad ratings, and feature-outcome
correlations strong enough that the bundled classifier lands in a realistic
accuracy range without being separable.

Usage: python3 tools/make_synthetic_credit.py [OUT_PATH]
"""

import sys
from math import exp, log

import numpy as np

SEED = 20240917
N = 1000
N_GOOD = 700

CHECKING = (["A11", "A12", "A13", "A14"], [0.27, 0.27, 0.06, 0.40])
HISTORY = (["A30", "A31", "A32", "A33", "A34"], [0.04, 0.05, 0.53, 0.09, 0.29])
PURPOSE = (["A40", "A41", "A42", "A43", "A44", "A45", "A46", "A48", "A49", "A410"],
           [0.234, 0.103, 0.181, 0.280, 0.012, 0.022, 0.050, 0.009, 0.097, 0.012])
SAVINGS = (["A61", "A62", "A63", "A64", "A65"], [0.60, 0.10, 0.06, 0.05, 0.19])
EMPLOYMENT = (["A71", "A72", "A73", "A74", "A75"], [0.06, 0.17, 0.34, 0.17, 0.26])
STATUS = (["A91", "A92", "A93", "A94"], [0.05, 0.31, 0.55, 0.09])
DEBTORS = (["A101", "A102", "A103"], [0.91, 0.04, 0.05])
PROPERTY = (["A121", "A122", "A123", "A124"], [0.28, 0.23, 0.33, 0.16])
PLANS = (["A141", "A142", "A143"], [0.14, 0.05, 0.81])
HOUSING = (["A151", "A152", "A153"], [0.18, 0.71, 0.11])
JOB = (["A171", "A172", "A173", "A174"], [0.02, 0.20, 0.63, 0.15])
TELEPHONE = (["A191", "A192"], [0.60, 0.40])
FOREIGN = (["A201", "A202"], [0.963, 0.037])

CHECKING_SCORE = {"A11": -1.1, "A12": -0.3, "A13": 0.5, "A14": 1.0}
HISTORY_SCORE = {"A30": -1.0, "A31": -0.7, "A32": 0.1, "A33": 0.2, "A34": 0.8}
SAVINGS_SCORE = {"A61": -0.4, "A62": -0.1, "A63": 0.2, "A64": 0.5, "A65": 0.3}
EMPLOYMENT_SCORE = {"A71": -0.5, "A72": -0.25, "A73": 0.05, "A74": 0.3, "A75": 0.4}
HOUSING_SCORE = {"A151": -0.15, "A152": 0.15, "A153": 0.0}
PROPERTY_SCORE = {"A121": 0.25, "A122": 0.05, "A123": 0.0, "A124": -0.3}


def pick(rng, table):
    codes, weights = table
    w = np.array(weights, dtype=float)
    return codes[int(rng.choice(len(codes), p=w / w.sum()))]


def sigmoid(z):
    return 1.0 / (1.0 + exp(-z)) if z >= 0 else exp(z) / (1.0 + exp(z))


def make_rows():
    rng = np.random.default_rng(SEED)
    rows = []
    scores = []
    for _ in range(N):
        checking = pick(rng, CHECKING)
        duration = int(rng.integers(4, 61))
        history = pick(rng, HISTORY)
        purpose = pick(rng, PURPOSE)
        amount = int(np.clip(rng.lognormal(log(2300.0), 0.75), 250, 18424))
        savings = pick(rng, SAVINGS)
        employment = pick(rng, EMPLOYMENT)
        installment = int(rng.integers(1, 5))
        status = pick(rng, STATUS)
        debtors = pick(rng, DEBTORS)
        residence = int(rng.integers(1, 5))
        prop = pick(rng, PROPERTY)
        age = int(np.clip(rng.gamma(9.0, 4.0), 19, 75))
        plans = pick(rng, PLANS)
        housing = pick(rng, HOUSING)
        existing = int(rng.integers(1, 5))
        job = pick(rng, JOB)
        liable = int(rng.integers(1, 3))
        phone = pick(rng, TELEPHONE)
        foreign = pick(rng, FOREIGN)

        score = (
            CHECKING_SCORE[checking]
            + HISTORY_SCORE[history]
            + SAVINGS_SCORE[savings]
            + EMPLOYMENT_SCORE[employment]
            + HOUSING_SCORE[housing]
            + PROPERTY_SCORE[prop]
            - 0.55 * (duration - 21) / 12.0
            - 0.45 * (log(amount) - log(2300.0))
            + 0.30 * (age - 35) / 20.0
            - 0.20 * (installment - 2.5)
            - (0.35 if foreign == "A201" else 0.0)
            - (0.15 if status in ("A92", "A95") else 0.0)
        )
        rows.append([
            checking, str(duration), history, purpose, str(amount), savings,
            employment, str(installment), status, debtors, str(residence), prop,
            str(age), plans, housing, str(existing), job, str(liable), phone, foreign,
        ])
        scores.append(score)

    scale, shift = 0.88, 0.8
    probs = [sigmoid(scale * s + shift) for s in scores]
    labels = [1 if rng.random() < p else 0 for p in probs]

    # nudge the least-confident labels until exactly N_GOOD rows are good
    surplus = sum(labels) - N_GOOD
    order = sorted(range(N), key=lambda i: (abs(probs[i] - 0.5), i))
    for i in order:
        if surplus == 0:
            break
        if surplus > 0 and labels[i] == 1:
            labels[i] = 0
            surplus -= 1
        elif surplus < 0 and labels[i] == 0:
            labels[i] = 1
            surplus += 1
    return rows, labels


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else "data/synthetic_credit.data"
    rows, labels = make_rows()
    with open(out, "w", encoding="utf-8") as fh:
        for row, label in zip(rows, labels):
            fh.write(" ".join(row + ["1" if label == 1 else "2"]) + "\n")
    print(f"wrote {len(rows)} rows ({sum(labels)} good) to {out}")


if __name__ == "__main__":
    main()
