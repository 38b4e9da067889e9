#!/usr/bin/env python3
"""Regenerates the per-round timing fixtures (tableA*.csv) and averages.csv."""
import os

# table -> (success set, {technique: [5 round times]}, [printed averages], [printed scores])
TABLES = {
    "A1": ("BST",
           {"B": [4.42, 4.23, 4.19, 4.94, 23.34],
            "E": [23.08, 4.01, 3.90, 23.07, 23.00],
            "U": [22.09, 22.11, 22.14, 22.97, 3.07],
            "S": [119.07, 253.69, 215.18, 100.12, 195.92],
            "T": [195.62, 296.76, 61.29, 118.80, 99.64],
            "Q": [21.34, 21.39, 21.29, 22.13, 2.186]},
           [8.23, 15.40, 14.26, 176.80, 154.42, 17.67],
           [5.46, 0, 0, 0.25, 0.29, 0]),
    "A2": ("BEUST",
           {"B": [8.44, 8.30, 8.55, 26.90, 8.47],
            "E": [43.41, 21.59, 22.05, 41.05, 23.24],
            "U": [3.34, 22.51, 3.46, 3.47, 22.57],
            "S": [272.56, 215.04, 196.03, 311.27, 522.80],
            "T": [541.80, 464.64, 783.58, 387.10, 349.79],
            "Q": [21.60, 2.36, 21.57, 21.54, 21.56]},
           [12.13, 30.27, 11.07, 303.54, 505.38, 17.73],
           [2.34, 0.94, 2.57, 0.09, 0.06, 0]),
    "A3": ("T",
           {"B": [3.84, 3.88, 3.94, 4.04, 4.07],
            "E": [4.13, 4.18, 4.34, 4.54, 4.28],
            "U": [22.43, 21.67, 21.14, 21.25, 21.92],
            "S": [4.85, 5.16, 5.15, 5.98, 5.79],
            "T": [29.78, 30.00, 29.69, 30.63, 32.42],
            "Q": [2.25, 2.14, 2.21, 2.19, 2.15]},
           [3.95, 4.29, 21.68, 5.39, 30.51, 2.19],
           [0, 0, 0, 0, 6, 0]),
    "A4": ("BUT",
           {"B": [25.11, 25.97, 24.4, 26.21, 28.84],
            "E": [19.53, 20.22, 20.13, 20.88, 21.38],
            "U": [23.82, 22.04, 22.76, 22.49, 27.46],
            "S": [20.85, 21.91, 21.19, 23.81, 24.41],
            "T": [52.53, 53.11, 52.74, 53.02, 55.52],
            "Q": [13.94, 13.2, 14.06, 14.35, 13.90]},
           [26.10, 20.43, 23.71, 22.44, 53.39, 13.90],
           [2.32, 0, 2.55, 0, 1.13, 0]),
    "A5": ("T",
           {"B": [7.71, 7.62, 7.74, 7.23, 7.46],
            "E": [8.48, 8.89, 9.33, 10.11, 8.45],
            "U": [27.43, 28.92, 29.87, 31.63, 30.02],
            "S": [9.07, 9.11, 9.9, 8.6, 9.06],
            "T": [34.72, 34.78, 35.69, 36.54, 35.09],
            "Q": [4.05, 4.42, 3.93, 4.16, 4.04]},
           [7.55, 9.05, 29.57, 9.15, 35.36, 4.12],
           [0, 0, 0, 0, 6, 0]),
    "A6": ("B",
           {"B": [22.63, 20.32, 21.09, 20.1, 20.89],
            "E": [17.21, 17.7, 17.88, 16.59, 16.26],
            "U": [27.44, 26.74, 28.78, 27.06, 27.08],
            "S": [19.74, 18.79, 19.91, 19.08, 19.81],
            "T": [20.96, 20.54, 21.2, 21.29, 20.8],
            "Q": [11.72, 12.04, 12.19, 10.91, 12.21]},
           [21.00, 17.13, 27.42, 19.47, 20.96, 11.81],
           [6, 0, 0, 0, 0, 0]),
    "A7": ("BS",
           {"B": [65.59, 61.43, 63.91, 58.72, 62.78],
            "E": [17.59, 20.44, 17.72, 17.54, 27.95],
            "U": [78.19, 81.52, 87.58, 77.35, 92.36],
            "S": [202.49, 201.87, 199.29, 197.94, 212.68],
            "T": [42.81, 44.99, 35.91, 38.85, 46.66],
            "Q": [5.22, 5.56, 5.61, 5.78, 12.93]},
           [62.49, 20.25, 83.40, 202.85, 41.85, 7.02],
           [4.59, 0, 0, 1.41, 0, 0]),
    "A8": ("BEUT",
           {"B": [6.63, 6.41, 6.33, 6.86, 6.47],
            "E": [18.05, 20.02, 18.0, 19.16, 20.09],
            "U": [31.0, 32.07, 31.15, 30.96, 31.83],
            "S": [10.68, 12.26, 10.46, 11.23, 11.22],
            "T": [55.29, 57.86, 55.22, 57.39, 55.86],
            "Q": [3.05, 3.04, 3.4, 3.18, 3.16]},
           [6.54, 19.06, 31.40, 11.17, 56.32, 3.17],
           [3.60, 1.23, 0.75, 0, 0.42, 0]),
    "A9": ("BUT",
           {"B": [44.58, 43.0, 42.37, 45.07, 45.26],
            "E": [34.07, 36.19, 33.57, 35.82, 35.55],
            "U": [47.84, 45.25, 48.07, 48.15, 45.49],
            "S": [36.67, 37.28, 38.94, 41.16, 38.41],
            "T": [157.65, 158.22, 166.8, 162.78, 159.21],
            "Q": [21.53, 21.55, 21.48, 22.65, 15.5]},
           [44.05, 35.04, 46.96, 38.49, 160.93, 20.54],
           [2.71, 0, 2.54, 0, 0.74, 0]),
    "A10": ("BEUT",
            {"B": [4.92, 4.69, 4.54, 4.67, 4.71],
             "E": [18.3, 19.09, 18.38, 18.53, 19.16],
             "U": [5.95, 5.98, 6.24, 6.01, 5.66],
             "S": [17.55, 17.49, 17.12, 17.19, 17.65],
             "T": [32.11, 31.7, 32.1, 31.78, 32.09],
             "Q": [2.62, 2.73, 2.32, 2.37, 2.43]},
            [4.70, 18.69, 5.97, 17.40, 31.96, 2.49],
            [2.74, 0.69, 2.16, 0, 0.40, 0]),
}

ORDER = "BEUSTQ"

def main():
    out_dir = os.path.dirname(os.path.abspath(__file__))
    for table, (successes, times, averages, scores) in TABLES.items():
        with open(os.path.join(out_dir, f"table{table}.csv"), "w") as f:
            f.write("round,technique,succeeded,seconds\n")
            for r in range(5):
                for t in ORDER:
                    ok = 1 if t in successes else 0
                    f.write(f"{r + 1},{t},{ok},{times[t][r]}\n")
    with open(os.path.join(out_dir, "averages.csv"), "w") as f:
        f.write("table,technique,succeeded,avg_seconds,score\n")
        for table, (successes, _times, averages, scores) in TABLES.items():
            for i, t in enumerate(ORDER):
                ok = 1 if t in successes else 0
                f.write(f"{table},{t},{ok},{averages[i]},{scores[i]}\n")

if __name__ == "__main__":
    main()
