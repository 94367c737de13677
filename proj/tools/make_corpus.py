#!/usr/bin/env python3
#
# Copyright 2026 The Greybox Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#
"""Regenerates data/corpus.csv, the bundled credit-assessment corpus.

Every example is two or three short clauses. Word frequencies per class are
controlled so that the bundled classifiers agree on which words carry the
sentiment: "poor" is strongly negative, "assurance" strongly positive, and
possibility/bankruptcy/lack/stability lean slightly negative.
"""

import csv
import random
import sys

NEG_NOUNS = ["credit history", "cash flow", "liquidity", "management",
             "repayment record", "earnings", "collateral", "governance",
             "margins", "planning"]
POS_NOUNS = NEG_NOUNS

# (template, count). {n} draws a noun.
NEGATIVE = [
    ("poor {n}", 40),
    ("weak {n}", 12),
    ("declining {n}", 10),
    ("heavy losses this year", 8),
    ("overdue loans and unpaid debt", 8),
    ("risky investments", 8),
    ("inadequate {n}", 5),
    ("miserable {n}", 3),
    ("frequent late payments", 6),
    ("possibility of default", 8),
    ("serious risk of bankruptcy", 8),
    ("lack of income", 8),
    ("questionable stability", 8),
    ("volatile revenue", 6),
    ("shrinking orders", 6),
    ("it will be hard to repay loans", 6),
    ("requires time to pay debts", 4),
    ("uncertain future", 6),
    ("one missing assurance letter", 1),
]

POSITIVE = [
    ("strong {n}", 20),
    ("solid {n}", 14),
    ("full assurance of repayment", 18),
    ("assurance from guarantors", 17),
    ("reliable {n}", 12),
    ("steady growth", 10),
    ("healthy {n}", 10),
    ("profitable operations", 8),
    ("excellent {n}", 8),
    ("timely payments", 8),
    ("secure income", 8),
    ("some possibility of expansion", 5),
    ("bankruptcy risk is remote", 5),
    ("lack of debt", 5),
    ("good stability", 5),
    ("average investments and insurance coverage", 4),
    ("applicant has a clean credit history", 6),
]


def expand(spec, rng):
    clauses = []
    for template, count in spec:
        for _ in range(count):
            clauses.append(template.format(n=rng.choice(NEG_NOUNS)))
    rng.shuffle(clauses)
    return clauses


def group(clauses, rng, n_examples):
    # Deal clauses into examples round robin so each example gets 1-3.
    buckets = [[] for _ in range(n_examples)]
    for i, clause in enumerate(clauses):
        buckets[i % n_examples].append(clause)
    out = []
    for b in buckets:
        rng.shuffle(b)
        text = ". ".join(b) + "."
        out.append(text[0].upper() + text[1:] if rng.random() < 0.5 else text)
    return out


def main():
    rng = random.Random(2026)
    neg = group(expand(NEGATIVE, rng), rng, 100)
    pos = group(expand(POSITIVE, rng), rng, 100)
    rows = [(t, "negative") for t in neg] + [(t, "positive") for t in pos]
    rng.shuffle(rows)
    out = open(sys.argv[1], "w", newline="") if len(sys.argv) > 1 else sys.stdout
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["text", "label"])
    writer.writerows(rows)


if __name__ == "__main__":
    main()
