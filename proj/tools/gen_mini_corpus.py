#!/usr/bin/env python3
"""Generates the bundled synthetic review corpus and demo dictionary.

Output is a pure function of --seed: rerunning reproduces data/ byte for byte.
"""
import argparse
import csv
import os
import random

PRODUCTS_JA = ["自転車", "パソコン", "靴", "バッグ", "時計", "財布", "タオル", "傘",
               "イヤホン", "マウス", "枕", "鍋", "シャツ", "帽子", "ケース"]
PRODUCTS_EN = ["bag", "watch", "shoes", "case", "cable", "mouse", "towel", "lamp"]

POSITIVE_JA = ["良い", "最高", "満足", "便利", "早い", "かわいい", "綺麗", "おすすめ",
               "丁寧", "嬉しい", "快適", "安い"]
NEGATIVE_JA = ["悪い", "最悪", "不満", "臭い", "遅い", "壊れ", "残念", "返品",
               "不良", "汚い", "失敗", "高い"]
POSITIVE_EN = ["good", "great", "excellent", "fast", "cheap", "cute", "nice"]
NEGATIVE_EN = ["bad", "broken", "slow", "poor", "terrible", "smelly", "awful"]

FILLERS_JA = ["届きました。", "購入しました。", "使っています。", "サイズは普通です。",
              "色は黒です。", "自転車通勤用に購入。", "また利用します。", "家族用に購入。"]
INTENSIFIERS_JA = ["とても", "本当に", "少し", ""]

# Hand-picked entries: the review segment used as the segmentation golden,
# function words, and a few shorter distractor entries that must lose.
FIXED_ENTRIES = [
    ("自転車", 100), ("自転", 150), ("車", 100), ("通勤用", 100), ("通勤", 150),
    ("用", 100), ("に", 50), ("購入", 100), ("。", 10), ("、", 10),
    ("サックス", 100), ("を", 50), ("選び", 100), ("ました", 60), ("が", 50),
    ("かわいい", 100), ("です", 60), ("パソコン", 100), ("は", 50), ("で", 50),
    ("でした", 60), ("では", 60), ("ない", 60), ("また", 80), ("利用", 100),
    ("します", 60), ("しました", 60), ("届き", 100), ("使って", 100), ("います", 60),
    ("サイズ", 100), ("普通", 100), ("色", 100), ("黒", 100), ("とても", 80),
    ("本当に", 80), ("少し", 80), ("家族", 100), (" ", 20), (".", 20), (",", 20),
    ("would", 100), ("buy", 100), ("again", 100), ("the", 100), ("The", 100),
    ("is", 60), ("not", 80), ("Really", 100), ("this", 100), ("This", 100), ("was", 60),
]


def japanese_review(rng, positive):
    words = POSITIVE_JA if positive else NEGATIVE_JA
    other = NEGATIVE_JA if positive else POSITIVE_JA
    product = rng.choice(PRODUCTS_JA)
    parts = []
    if rng.random() < 0.5:
        parts.append(rng.choice(FILLERS_JA))
    adj = rng.choice(words)
    style = rng.randrange(3)
    if style == 0:
        parts.append(f"{product}は{rng.choice(INTENSIFIERS_JA)}{adj}です。")
    elif style == 1:
        parts.append(f"{product}を購入。{adj}でした。")
    else:
        # Negated opposite word plus two own-sentiment words: order-blind
        # features still lean the right way.
        parts.append(f"{product}は{rng.choice(other)}ではない。{adj}です。{rng.choice(words)}。")
    if rng.random() < 0.15:
        parts.append(f"{rng.choice(other)}ですが、")
    if rng.random() < 0.3:
        parts.append(rng.choice(FILLERS_JA))
    # The source data carries literal backslash-n pairs between sentences.
    sep = "\\n " if rng.random() < 0.2 else ""
    return sep.join(parts) if sep else "".join(parts)


def english_review(rng, positive):
    words = POSITIVE_EN if positive else NEGATIVE_EN
    other = NEGATIVE_EN if positive else POSITIVE_EN
    product = rng.choice(PRODUCTS_EN)
    adj = rng.choice(words)
    style = rng.randrange(3)
    if style == 0:
        text = f"The {product} is {adj}."
    elif style == 1:
        text = f"{adj} {product}, would buy again" if positive else f"{adj} {product}, not again"
    else:
        text = f"This {product} was {adj}, not {rng.choice(other)}. Really {rng.choice(words)}."
    if rng.random() < 0.15:
        text += f" {rng.choice(other)} box."
    return text


def make_rows(rng, n, noise):
    rows = []
    for _ in range(n):
        positive = rng.random() < 0.5
        body = japanese_review(rng, positive) if rng.random() < 0.7 else english_review(rng, positive)
        title = rng.choice((POSITIVE_JA + POSITIVE_EN) if positive else (NEGATIVE_JA + NEGATIVE_EN))
        label = 2 if positive else 1
        if rng.random() < noise:
            label = 3 - label
        rows.append((str(label), title, body))
    return rows


def write_csv(path, rows):
    with open(path, "w", encoding="utf-8", newline="") as f:
        w = csv.writer(f, quoting=csv.QUOTE_ALL, lineterminator="\n")
        w.writerows(rows)


def write_dictionary(path):
    entries = dict(FIXED_ENTRIES)
    for w in PRODUCTS_JA + POSITIVE_JA + NEGATIVE_JA + PRODUCTS_EN + POSITIVE_EN + NEGATIVE_EN:
        entries.setdefault(w, 100)
    entries.setdefault("box", 100)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("# Demo surface dictionary: surface<TAB>cost (lower is preferred)\n")
        for surface, cost in entries.items():
            f.write(f"{surface}\t{cost}\n")
        f.write("__UNKNOWN__\t10000\n")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "data"))
    ap.add_argument("--seed", type=int, default=20210104)
    ap.add_argument("--train", type=int, default=2000)
    ap.add_argument("--test", type=int, default=400)
    ap.add_argument("--noise", type=float, default=0.03)
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    rng = random.Random(args.seed)
    write_csv(os.path.join(args.out, "mini_train.csv"), make_rows(rng, args.train, args.noise))
    write_csv(os.path.join(args.out, "mini_test.csv"), make_rows(rng, args.test, args.noise))
    write_dictionary(os.path.join(args.out, "demo_dict.tsv"))


if __name__ == "__main__":
    main()
