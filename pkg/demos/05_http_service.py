"""Drive the HTTP service end to end: import, label, annotate, export.

Starts the server on a local port in a background thread, then walks the
whole interactive loop through plain HTTP calls, the way the browser UI
does it.
"""

import threading
import time

import httpx
import uvicorn

from textfactor.engine import HyperParams
from textfactor.server import AppConfig, create_app
from textfactor.session import Session

CORPUS = "\n".join(
    [f"superb fiber uplink in area {i}" for i in range(10)]
    + [f"{topic} report {j}"
       for topic in ("billing portal crash", "delivery van late",
                     "signal drop issue", "router setup pain")
       for j in range(5)]
)

session = Session(hp=HyperParams(alpha=0.1, gamma=0.01, k=16, seed=0,
                                 max_passes=100, patience=5))
app = create_app(session, AppConfig())
server = uvicorn.Server(uvicorn.Config(app, host="127.0.0.1", port=8377,
                                       log_level="error"))
thread = threading.Thread(target=server.run, daemon=True)
thread.start()
while not server.started:
    time.sleep(0.02)

base = "http://127.0.0.1:8377"
with httpx.Client(base_url=base, timeout=10.0) as client:
    print("POST /corpus")
    print("  ", client.post("/corpus", json={"payload": CORPUS}).json())

    print("POST /labels")
    label = client.post("/labels", json={"name": "fiber quality"}).json()
    print("  ", label)

    session.wait_converged(timeout=30)
    print("GET /status ->", client.get("/status").json()["state"])

    print("POST /annotations (rows 0..2 positive)")
    for row in (0, 1, 2):
        ack = client.post("/annotations", json={
            "row_id": row, "label_id": label["label_id"], "value": 1}).json()
        print(f"   row {row}: refreshed={ack['refreshed']} "
              f"snapshot_pass={ack['snapshot_pass']}")

    session.wait_converged(timeout=30)
    print("GET /labels/{id}/top")
    top = client.get(f"/labels/{label['label_id']}/top",
                     params={"limit": 5}).json()
    for item in top["items"]:
        print(f"   rank {item['rank']}  {item['score']:+.3f}  {item['raw']}")

    print("GET /export")
    csv_text = client.get("/export").text
    print("   header:", csv_text.splitlines()[0])
    print(f"   {len(csv_text.splitlines()) - 1} data rows")

server.should_exit = True
thread.join(timeout=5)
session.close()
print("done")
