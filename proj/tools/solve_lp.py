#!/usr/bin/env python3
"""Solve an exported LP file with HiGHS and print the outcome.

Usage: solve_lp.py MODEL.lp [--fix SCHEDULE.json]

With --fix, every x_i_j_t is bounded to the given schedule (1 at the start
slot, 0 elsewhere) before solving, which checks that the schedule is a
feasible point of the model.

Prints one line: "status=<optimal|infeasible|other> objective=<value>".
Exit 0 on a solver outcome, 2 if HiGHS is unavailable.
"""

import json
import sys


def main(argv):
    try:
        import highspy
    except ImportError:
        print("highspy not available", file=sys.stderr)
        return 2

    if len(argv) not in (2, 4) or (len(argv) == 4 and argv[2] != "--fix"):
        print(__doc__, file=sys.stderr)
        return 2

    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("mip_rel_gap", 0.0)
    h.setOptionValue("mip_abs_gap", 1e-9)
    h.readModel(argv[1])

    if len(argv) == 4:
        with open(argv[3]) as f:
            starts = json.load(f)["starts"]
        lp = h.getLp()
        names = list(lp.col_names_)
        for col, name in enumerate(names):
            if not name.startswith("x_"):
                continue
            _, i, j, t = name.split("_")
            value = 1.0 if starts[int(i) - 1][int(j) - 1] == int(t) else 0.0
            h.changeColBounds(col, value, value)

    h.run()
    status = h.getModelStatus()
    if status == highspy.HighsModelStatus.kOptimal:
        print("status=optimal objective=%.12g" % h.getInfo().objective_function_value)
    elif status == highspy.HighsModelStatus.kInfeasible:
        print("status=infeasible objective=nan")
    else:
        print("status=other objective=nan")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
