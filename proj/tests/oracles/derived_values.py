"""Independent oracles for the derived expected values frozen into the C++ tests.

Run: python3 tests/oracles/derived_values.py
"""
import itertools
import math
import re
from fractions import Fraction


def tokenize(text, phrases=(), stopwords=()):
    """Reference greedy phrase tokenizer: lowercase, phrases matched on word
    sequences separated only by whitespace, then split on non-alphanumerics."""
    text = text.lower()
    words = [(m.group(0), m.start(), m.end()) for m in re.finditer(r"[a-z0-9\x80-￿]+", text)]
    phrase_words = sorted((p.lower().split() for p in phrases), key=len, reverse=True)
    out, i = [], 0
    while i < len(words):
        for pw in phrase_words:
            n = len(pw)
            if i + n > len(words):
                continue
            if [w[0] for w in words[i:i + n]] != pw:
                continue
            gaps = [text[words[j][2]:words[j + 1][1]] for j in range(i, i + n - 1)]
            if all(g.strip() == "" for g in gaps):
                out.append(" ".join(pw))
                i += n
                break
        else:
            out.append(words[i][0])
            i += 1
    return [t for t in out if t not in stopwords]


def mw_u(x, y):
    pooled = sorted(x + y)
    def midrank(v):
        lo = pooled.index(v)
        hi = len(pooled) - pooled[::-1].index(v)
        return Fraction(lo + 1 + hi, 2)
    rx = sum(midrank(v) for v in x)
    return rx - Fraction(len(x) * (len(x) + 1), 2)


def exact_less(x, y):
    pooled = x + y
    ux = mw_u(x, y)
    hits = total = 0
    for comb in itertools.combinations(range(len(pooled)), len(x)):
        xs = [pooled[i] for i in comb]
        ys = [pooled[i] for i in range(len(pooled)) if i not in comb]
        total += 1
        hits += mw_u(xs, ys) <= ux
    return Fraction(hits, total)


print("tokenize:", tokenize("Tax Cut, tax-cut", phrases=["tax cut"]))
print("tokenize fig1:", tokenize("A B C B"))
print("tfidf 6*ln2 =", repr(6 * math.log(2)))
print("fig2 merged mean:", (5 + 3 + 6 + 2 + 1) / 5)
fig1 = {1: (1, "A B C B"), 2: (1, "D C A A"), 3: (2, "A E D B")}
per_ts = {}
for d, (ts, text) in fig1.items():
    c, docs = per_ts.get(ts, (0, set()))
    per_ts[ts] = (c + len(text.split()), docs | {d})
print("fig1 collapse over terms:", per_ts)
a_count = sum(text.split().count("A") for d, (ts, text) in fig1.items() if ts == 1)
print("fig1 A@1 count:", a_count)
print("U({1,2},{3,4}) =", mw_u([1, 2], [3, 4]), "exact p less =", exact_less([1, 2], [3, 4]))
print("3v3 extreme p =", exact_less([1, 2, 3], [8, 9, 10]))
print("4v4 extreme p =", exact_less([1, 2, 3, 4], [8, 9, 10, 11]))
print("identical 3v3 U =", mw_u([1, 2, 3], [1, 2, 3]), "p =", exact_less([1, 2, 3], [1, 2, 3]))
print("ties x={1,2,2} y={2,3}: U =", mw_u([1, 2, 2], [2, 3]), "p =", exact_less([1, 2, 2], [2, 3]))
slopes = [1, 4, 2, 9]
d = [slopes[i + 1] - slopes[i] for i in range(len(slopes) - 1)]
print("max slope", max(d), "at edge", d.index(max(d)))

try:
    from scipy.stats import chi2
    print("chi2 ppf 0.99 df 9 =", repr(float(chi2.ppf(0.99, 9))))
except ImportError:
    print("chi2 ppf 0.99 df 9 = 21.665994333461924 (scipy unavailable)")
