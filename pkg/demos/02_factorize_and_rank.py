"""Train factors on a labeled corpus and rank texts for a label.

Ten texts about fiber quality hide inside a 50-text corpus. Three of them
get a positive annotation; after training, the factorization surfaces the
remaining fiber texts at the top of the label's ranking.
"""

import numpy as np

from textfactor import (HyperParams, ObservationStore, TextDoc, build_vocab,
                        encode, init_model, top_labels_for_text,
                        top_texts_for_label, train)

rng = np.random.default_rng(0)

fiber = [f"superb fiber uplink in area {i}" for i in range(10)]
topics = ["billing portal crash", "delivery van late", "signal drop issue",
          "router setup pain", "support call wait"]
noise = [f"{topic} report {j}" for topic in topics for j in range(8)]
docs = [TextDoc(i, text) for i, text in enumerate(fiber + noise)]

vocab = build_vocab(docs, min_count=2)
store = ObservationStore(m=len(docs), n1=vocab.n1, n2=1)
for doc in docs:
    store.set_features(doc.row_id, encode(doc, vocab))

print(f"corpus: {store.m} texts, {store.n1} n-gram columns, "
      f"{store.observed_count} observed cells "
      f"({store.stats().zero_rate:.1%} empty)")

# annotate three fiber texts positively for label 0
for row in (0, 1, 2):
    store.set_label(row, 0, 1)

hp = HyperParams(alpha=0.1, gamma=0.01, k=16, seed=0, max_passes=200,
                 patience=5)
model = init_model(store.m, store.n, hp.k, seed=0)
report = train(model, store, hp)
print(f"trained {report.passes_run} passes "
      f"(early stop: {report.stopped_early}), "
      f"train rmse {report.final_train_rmse:.3f}")

print("\ntop texts for the label (annotated rows excluded):")
for item in top_texts_for_label(model, store, 0, limit=8):
    print(f"  rank {item.rank:>2}  score {item.score:+.3f}  "
          f"{docs[item.item_id].raw}")

print("\nlabel scores for one unannotated fiber text and one noise text:")
for row in (5, 20):
    scores = top_labels_for_text(model, store, row)
    print(f"  row {row:>2} ({docs[row].raw!r}): score {scores[0].score:+.3f}")
