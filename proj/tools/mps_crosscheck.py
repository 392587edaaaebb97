#!/usr/bin/env python3
# Copyright 2026 The fleetarb Authors
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Solve an MPS file with HiGHS and print the objective.

Output is one line: `<status> <objective>`. Exit code 0 when HiGHS reports an
optimum, 1 otherwise, 3 when highspy is not installed.
"""
import argparse
import sys


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("mps")
    ap.add_argument("--gap", type=float, default=1e-9, help="relative MIP gap")
    ap.add_argument("--time-limit", type=float, default=600.0)
    args = ap.parse_args()
    try:
        import highspy
    except ImportError:
        print("highspy not available", file=sys.stderr)
        return 3

    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("mip_rel_gap", args.gap)
    h.setOptionValue("time_limit", args.time_limit)
    if h.readModel(args.mps) != highspy.HighsStatus.kOk:
        print("cannot read " + args.mps, file=sys.stderr)
        return 1
    h.run()
    status = h.getModelStatus()
    if status != highspy.HighsModelStatus.kOptimal:
        print(h.modelStatusToString(status))
        return 1
    print("optimal %.12g" % h.getInfo().objective_function_value)
    return 0


if __name__ == "__main__":
    sys.exit(main())
