#!/usr/bin/env python3
"""Regenerates maze_trajectory.txt: a scripted figure-eight patrol.

The robot drives corridor centerlines at constant speed and turns in place
at corners. Lap order revisits the outer ring and both inner loops several
times so place recognition sees the same corridors again minutes apart.
"""

import math

SPEED = 0.35        # m/s along straights
TURN_RATE = math.radians(30.0)  # in-place turn speed
SCAN_RATE = 5.0     # Hz, consumed by the simulator

# corridor centerline nodes (1.4 m off every wall)
SW = (1.4, 1.4)
SE = (15.4, 1.4)
NE = (15.4, 11.2)
NW = (1.4, 11.2)
SM = (8.4, 1.4)    # south end of the middle corridor
NM = (8.4, 11.2)   # north end

E, N, W, S = 0.0, math.pi / 2, math.pi, -math.pi / 2

# Each lap is a closed node cycle starting and ending at SW.
OUTER = [SW, SE, NE, NW, SW]
LEFT = [SW, SM, NM, NW, SW]
RIGHT = [SW, SM, SE, NE, NM, SM, SW]  # around the east block, with spurs

LAPS = [OUTER, LEFT, RIGHT, OUTER, LEFT, RIGHT, OUTER, LEFT, OUTER]


def heading(a, b):
    return math.atan2(b[1] - a[1], b[0] - a[0])


def wrap(angle):
    return math.atan2(math.sin(angle), math.cos(angle))


def main():
    waypoints = []  # (t, x, y, theta)
    t = 0.0
    pos = SW
    th = E
    waypoints.append((t, *pos, th))
    for lap in LAPS:
        assert lap[0] == pos
        for target in lap[1:]:
            want = heading(pos, target)
            turn = wrap(want - th)
            if abs(turn) > 1e-9:
                t += abs(turn) / TURN_RATE
                th = want
                waypoints.append((t, *pos, th))
            dist = math.hypot(target[0] - pos[0], target[1] - pos[1])
            t += dist / SPEED
            pos = target
            waypoints.append((t, *pos, th))

    with open("maze_trajectory.txt", "w") as f:
        f.write("# figure-eight patrol of the maze corridors; regenerate with\n")
        f.write("# make_maze_trajectory.py\n")
        f.write(f"scan_rate {SCAN_RATE}\n")
        for (wt, x, y, wth) in waypoints:
            f.write(f"{wt:.4f} {x:.4f} {y:.4f} {wth:.6f}\n")
    print(f"{len(waypoints)} waypoints, {t:.1f} s total")


if __name__ == "__main__":
    main()
