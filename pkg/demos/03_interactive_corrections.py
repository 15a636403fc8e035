"""The correction loop: annotate, refresh, watch the ranking move.

A session wires the featurizer, store, engine and ranker together. Each
annotation is applied to the live model as a bounded local refresh, so
the very next query reflects it; background passes then propagate the
signal to similar texts.
"""

from textfactor.engine import HyperParams
from textfactor.session import Session

CORPUS = "\n".join(
    [f"superb fiber uplink in area {i}" for i in range(10)]
    + [f"{topic} report {j}"
       for topic in ("billing portal crash", "delivery van late",
                     "signal drop issue", "router setup pain",
                     "support call wait", "contract renewal offer",
                     "mobile app glitch", "store queue long")
       for j in range(5)]
)

session = Session(hp=HyperParams(alpha=0.1, gamma=0.01, k=16, seed=0,
                                 max_passes=200, patience=5),
                  start_worker=False)
summary = session.import_corpus(CORPUS)
print(f"imported {summary['m']} texts, vocabulary {summary['vocab_size']}")

label = session.create_label("fiber quality")
session.run_training()

print("\nbefore any annotation, ranking is centered near zero:")
for item in session.top_texts(label.label_id, limit=3)["items"]:
    print(f"  {item['score']:+.3f}  {item['raw']}")

print("\nannotating rows 0..2 positively; each returns refreshed scores:")
for row in (0, 1, 2):
    ack = session.annotate(row, label.label_id, 1)
    own = ack["scores"][0]["score"]
    print(f"  row {row}: refreshed={ack['refreshed']}  "
          f"own score now {own:+.3f}")

session.run_training()  # a few propagation passes (early stopping applies)

print("\nafter the corrections propagate, similar texts surface:")
for item in session.top_texts(label.label_id, limit=7)["items"]:
    print(f"  rank {item['rank']}  {item['score']:+.3f}  {item['raw']}")

print("\na mistaken annotation is just another event; the latest one wins:")
session.annotate(0, label.label_id, 0)
view = session.text_scores(0)
print(f"  row 0 annotated value: {view['scores'][0]['annotated']}, "
      f"score {view['scores'][0]['score']:+.3f}")
print(f"  event log holds {len(session.events)} events; "
      f"the store folds to {len(session.fold_annotation_log())} live cells")
