#!/usr/bin/env python3
# Copyright 2026 The hybridir Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes the metric fixture and prints AP, P@20 and nDCG@20 per topic.

Standalone reference for the acceptance suite: ranks come from sorting by
score, gains are linear grades, discounts log2(rank + 1).
"""

import math
import sys


def docs(*numbers):
    return ["D%02d" % n for n in numbers]


RUN = {
    "T1": docs(*range(1, 21)),
    "T2": docs(*range(30, 10, -1)),
    "T3": docs(5, 10, 15, 20, 25),
    "T4": docs(7, 22, 13, 1, 30, 18, 4, 26, 9, 15, 11, 28, 2, 20, 16, 5, 24, 12,
               29, 3, 19, 8, 27, 14, 6, 21, 10, 25, 17, 23),
    "T5": docs(9, 4, 17),
    "T6": docs(1, 2, 3),
}

QRELS = {
    "T1": {"D01": 2, "D03": 1, "D07": 1, "D25": 2, "D02": 0},
    "T2": {"D11": 3, "D20": 1, "D29": 2, "D12": 0},
    "T3": {"D05": 1, "D10": 1, "D15": 1, "D20": 1, "D25": 1, "D01": 0},
    "T4": {"D07": 1, "D01": 3, "D26": 2, "D05": 1, "D03": 2, "D23": 1,
           "D14": 0, "D30": 0},
    "T5": {"D04": 1, "D09": 0},
}


def ap(ranking, judgments):
    rel = {d for d, g in judgments.items() if g > 0}
    if not rel:
        return None
    found, total = 0, 0.0
    for i, d in enumerate(ranking[:1000], start=1):
        if d in rel:
            found += 1
            total += found / i
    return total / len(rel)


def p_at(ranking, judgments, k=20):
    return sum(1 for d in ranking[:k] if judgments.get(d, 0) > 0) / k


def ndcg_at(ranking, judgments, k=20):
    dcg = sum(judgments.get(d, 0) / math.log2(i + 1)
              for i, d in enumerate(ranking[:k], start=1))
    ideal = sorted((g for g in judgments.values() if g > 0), reverse=True)[:k]
    idcg = sum(g / math.log2(i + 1) for i, g in enumerate(ideal, start=1))
    return None if idcg == 0 else dcg / idcg


def main(out_dir):
    with open(out_dir + "/metric_fixture.run", "w") as f:
        for topic, ranking in RUN.items():
            for rank, d in enumerate(ranking, start=1):
                f.write("%s Q0 %s %d %.6f fixture\n" % (topic, d, rank, 100.0 - rank))
    with open(out_dir + "/metric_fixture.qrels", "w") as f:
        for topic, judgments in QRELS.items():
            for d, g in judgments.items():
                f.write("%s 0 %s %d\n" % (topic, d, g))
    for topic in sorted(QRELS):
        r, j = RUN[topic], QRELS[topic]
        print("%s %.12f %.12f %.12f" % (topic, ap(r, j), p_at(r, j), ndcg_at(r, j)))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else ".")
