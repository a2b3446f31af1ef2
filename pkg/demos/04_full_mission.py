"""A full supervised mission: sudden obstacle, reactive dodge, replanning.

Runs the short-sonar scenario in which the object is first seen only 40 m
out, prints the mode timeline and metrics, and writes the trajectory SVG.

Run:  python3 demos/04_full_mission.py
"""

from pathlib import Path

from deepc_guidance import load_scenario, run_scenario
from deepc_guidance.cli import _trajectory_svg, metrics_to_dict

HERE = Path(__file__).resolve().parent
OUT = HERE / "output"
OUT.mkdir(exist_ok=True)

scenario = load_scenario(HERE.parent / "scenarios" / "sudden_obstacle.json")
print(f"sonar range {scenario.sonar.range} m, "
      f"obstacle at x = {scenario.world.obstacles[0].ellipse.center.x} m")

log, metrics = run_scenario(scenario)

print("\nevents:")
for t, text in log.events:
    print(f"  {t:7.1f} s  {text}")

print("\nmode timeline:", " -> ".join(m.value for m in log.mode_sequence()))
print("\nmetrics:")
for key, value in metrics_to_dict(metrics).items():
    print(f"  {key}: {value}")

svg = OUT / "full_mission.svg"
_trajectory_svg(scenario, log, svg)
print(f"\nwrote {svg}")
