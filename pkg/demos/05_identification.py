"""Both identification maneuvers: holding station in the flow shade of a
small object under current, and orbiting a large one at fixed standoff.

Run:  python3 demos/05_identification.py
"""

import math
from pathlib import Path

from deepc_guidance import load_scenario, run_scenario
from deepc_guidance.cli import _trajectory_svg
from deepc_guidance.geometry import dist, distance_to_ellipse
from deepc_guidance.identification import flow_shade_goal

HERE = Path(__file__).resolve().parent
OUT = HERE / "output"
OUT.mkdir(exist_ok=True)

# --- aligning under a 0.5 m/s current --------------------------------------
scenario = load_scenario(HERE.parent / "scenarios" / "align_current.json")
obj = scenario.world.obstacles[0]
goal = flow_shade_goal(obj, scenario.world.current, scenario.vcs.align)
print(f"current {scenario.world.current.speed} m/s east; "
      f"flow-shade station at ({goal.x:.1f}, {goal.y:.1f})")

log, metrics = run_scenario(scenario)
for t, text in log.events:
    if "align" in text or "identified" in text:
        print(f"  {t:7.1f} s  {text}")
done = [t for t, e in log.events if "-> Done" in e][0]
at_done = [s for s in log.samples if s.time == done][0]
print(f"  station error at Done: {dist(at_done.position, goal):.2f} m, "
      f"heading {math.degrees(at_done.course):.1f} deg (current flows toward 0 deg)")
_trajectory_svg(scenario, log, OUT / "align_mission.svg")
print(f"wrote {OUT / 'align_mission.svg'}")

# --- going around a large object --------------------------------------------
scenario = load_scenario(HERE.parent / "scenarios" / "orbit_survey.json")
obj = scenario.world.obstacles[0]
target = scenario.vcs.orbit.target_distance
print(f"\norbiting {obj.id} (a={obj.ellipse.a}, b={obj.ellipse.b}) "
      f"at {target} m standoff")

log, metrics = run_scenario(scenario)
for t, text in log.events:
    if "orbit" in text or "identified" in text:
        print(f"  {t:7.1f} s  {text}")

engage = [t for t, e in log.events if "Steering -> Tracking" in e][0]
done = [t for t, e in log.events if "Tracking -> Done" in e][0]
errors = [abs(distance_to_ellipse(s.position, obj.ellipse) - target)
          for s in log.samples if engage <= s.time <= done]
print(f"  standoff error while tracking: mean {sum(errors) / len(errors):.2f} m, "
      f"max {max(errors):.2f} m")
_trajectory_svg(scenario, log, OUT / "orbit_mission.svg")
print(f"wrote {OUT / 'orbit_mission.svg'}")
