"""Regenerate the small synthetic tables under data/synthetic/.

ccf_synthetic.csv mimics a card-transaction layout (Time, V1..V28, Amount,
Class) with a rare positive class. lp_synthetic.csv mimics a loan-application
layout with categorical columns, missing cells and a Y/N label.
"""

import csv
import pathlib

import numpy as np

OUT = pathlib.Path(__file__).resolve().parent.parent / "data" / "synthetic"


def ccf(rng, n_legit=760, n_fraud=40):
    rows = []
    shift = np.zeros(28)
    shift[[0, 2, 3, 9, 11, 13, 16]] = [-2.5, -3.0, 2.2, -2.0, -2.6, -3.1, -2.4]
    for label, count in ((0, n_legit), (1, n_fraud)):
        v = rng.normal(size=(count, 28)) * (1.6 if label else 1.0) + (shift if label else 0.0)
        t = rng.uniform(0, 172792, size=count)
        amount = np.round(rng.lognormal(3.5, 1.2, size=count), 2)
        for i in range(count):
            rows.append([round(t[i])] + [round(x, 6) for x in v[i]] + [amount[i], label])
    order = rng.permutation(len(rows))
    header = ["Time"] + [f"V{i}" for i in range(1, 29)] + ["Amount", "Class"]
    return header, [rows[i] for i in order]


def lp(rng, n=614):
    header = [
        "Loan_ID", "Gender", "Married", "Dependents", "Education", "Self_Employed",
        "ApplicantIncome", "CoapplicantIncome", "LoanAmount", "Loan_Amount_Term",
        "Credit_History", "Property_Area", "Loan_Status",
    ]
    rows = []
    for i in range(n):
        credit = 1.0 if rng.random() < 0.84 else 0.0
        income = int(rng.lognormal(8.4, 0.6))
        co = int(rng.lognormal(7.0, 1.0)) if rng.random() < 0.55 else 0
        amount = int(max(9, rng.normal(140, 60)))
        married = "Yes" if rng.random() < 0.65 else "No"
        area = rng.choice(["Urban", "Rural", "Semiurban"])
        score = 2.6 * credit - 1.3 + 0.3 * (area == "Semiurban") + 0.2 * (married == "Yes") + rng.normal(0, 0.7)
        row = [
            f"LP{1000 + i:06d}",
            "Male" if rng.random() < 0.8 else "Female",
            married,
            rng.choice(["0", "1", "2", "3+"], p=[0.57, 0.17, 0.17, 0.09]),
            "Graduate" if rng.random() < 0.78 else "Not Graduate",
            "Yes" if rng.random() < 0.14 else "No",
            income,
            co,
            amount,
            int(rng.choice([360, 180, 480, 300, 120], p=[0.85, 0.07, 0.03, 0.03, 0.02])),
            int(credit),
            area,
            "Y" if score > 0 else "N",
        ]
        for j in (1, 2, 3, 5, 8, 9, 10):
            if rng.random() < 0.03:
                row[j] = ""
        rows.append(row)
    return header, rows


def write(name, header, rows):
    with open(OUT / name, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


if __name__ == "__main__":
    OUT.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(20240611)
    write("ccf_synthetic.csv", *ccf(rng))
    write("lp_synthetic.csv", *lp(rng))
