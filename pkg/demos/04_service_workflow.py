"""
Driving the planning service
============================

The HTTP facade exposes both phases to the browser planner: background
generation jobs with progress polling, per-session grid editing with live
diagnostics, memory-guarded solving, and CSV export. This demo drives the
app in-process; `rotagen serve` runs the same app over a real socket.
"""

import time

from fastapi.testclient import TestClient

from rotagen.service import create_app

client = TestClient(create_app())

params = dict(
    n_shift_types=2,
    workdays_per_week=7,
    weeks=4,
    shift_hours=8.33,
    weekly_hours=36.0,
    weekly_rest_hours=36.0,
    min_free_cluster=2,
)

# Kick off a FAST generation job and poll it.
job_id = client.post(
    "/phase1/jobs",
    json={"params": params, "mode": "FAST", "cluster_free_days": True},
).json()["job_id"]
while True:
    status = client.get(f"/phase1/jobs/{job_id}").json()
    if status["state"] != "RUNNING":
        break
    time.sleep(0.05)
print("job:", status["state"], "-", status["solutions_found"], "patterns")

# Browse a page of patterns, like the slider in a GUI.
page = client.get(
    f"/phase1/jobs/{job_id}/combinations", params={"offset": 0, "limit": 3}
).json()
for item in page["items"]:
    print(f"#{item['index']} weekends off: {item['weekends_off']} bits: {item['bits']}")

# Open a planning session on pattern #0; the grid starts as all day-shifts.
session = client.post(
    "/phase2/sessions", json={"job_id": job_id, "combination_index": 0}
).json()
sid = session["session_id"]
print("evening coverage before editing:",
      [col[1] for col in session["diagnostics"]["coverage"]])

# Flip one cell to an evening shift and read the fresh diagnostics.
cells = session["matrix"]["cells"]
week, col = next(
    (w, c)
    for w, row in enumerate(cells)
    for c in range(6)
    if row[c] == 0 and row[c + 1] == 0
)
edited = client.put(
    f"/phase2/sessions/{sid}/cells",
    json={"row": week, "column": col, "shift_type": 1},
).json()
print(f"evening on ({week},{col}) ->",
      edited["diagnostics"]["cell_flags"][week][col + 1], "next morning")

# Revert and search for all feasible assignments instead.
client.put(
    f"/phase2/sessions/{sid}/cells",
    json={"row": week, "column": col, "shift_type": 0},
)
summary = client.post(f"/phase2/sessions/{sid}/solve", json={"method": "AUTO"}).json()
print("solve:", summary)

if summary.get("solution_count"):
    csv_bytes = client.post(
        f"/phase2/sessions/{sid}/export", json={"solution_index": 0}
    ).content
    print("exported CSV starts with:", csv_bytes.decode().splitlines()[0][:60])
