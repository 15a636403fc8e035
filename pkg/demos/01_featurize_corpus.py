"""From raw short texts to sparse presence rows.

Walks the encoding pipeline: tokenization, 1-3-gram expansion, the
frequency-filtered vocabulary, and the per-text column sets that become
the feature block of the observation matrix.
"""

from textfactor import TextDoc, build_vocab, encode, extract_ngrams, tokenize

raw_texts = [
    "This is the best 4G network!",
    "Best 4G network in the region, period.",
    "Worst billing portal. The portal keeps crashing!",
    "The billing portal crashed again...",
    "Delivery was on time, setup was easy.",
    "Setup was easy; delivery on time.",
]

print("= tokenization ".ljust(60, "="))
for text in raw_texts[:3]:
    print(f"  {text!r}\n    -> {tokenize(text)}")

print("\n= 1-3-gram expansion ".ljust(60, "="))
tokens = tokenize(raw_texts[0])
grams = extract_ngrams(tokens)
print(f"  {len(tokens)} tokens expand to {len(grams)} n-grams "
      f"(3t-3 = {3 * len(tokens) - 3})")
print(f"  trigrams: {[g for g in grams if g.count(' ') == 2]}")

print("\n= frequency-filtered vocabulary ".ljust(60, "="))
docs = [TextDoc(i, t) for i, t in enumerate(raw_texts)]
vocab = build_vocab(docs, min_count=2)
print(f"  {vocab.n1} n-grams survive the min_count=2 filter "
      f"(column ids are lexicographic):")
for term in sorted(vocab.terms)[:12]:
    print(f"    col {vocab.terms[term]:>3}  {term!r}")

print("\n= presence encoding ".ljust(60, "="))
for doc in docs:
    cols = sorted(encode(doc, vocab))
    print(f"  row {doc.row_id}: {len(cols):>2} feature cells -> {cols}")
print("\nabsent cells are never stored; a cell is 1 simply by being present")
