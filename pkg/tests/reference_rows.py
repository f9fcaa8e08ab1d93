"""Reference extremal rows: (k, P(k), R(k), ratio, factorization)."""

HIGH_SMALL = [
    (4, 5, 1, 2.60171, "2^2"),
    (5, 19, 4, 2.12894, "5^1"),
    (6, 7, 1, 2.81814, "2^1 3^1"),
    (461, 37363, 22, 2.15991, "461^1"),
    (1623, 123203, 1478, 2.20945, "3^1 541^1"),
    (1945, 169937, 722, 1.96788, "5^1 389^1"),
    (3246, 123203, 3101, 2.02004, "2^1 3^1 541^1"),
    (10948, 642973, 7989, 1.96035, "2^2 7^1 17^1 23^1"),
    (23636, 2183963, 9451, 2.08501, "2^2 19^1 311^1"),
]

HIGH_LARGE = [
    (199432, 27361751, 39567, 1.98407, "2^3 97^1 257^1"),
    (297491, 94537921, 233274, 2.00862, "521^1 571^1"),
    (732509, 267676337, 310552, 2.00382, "732509^1"),
    (760303, 280096127, 304623, 2.014, "863^1 881^1"),
    (783968, 136749709, 339277, 1.99594, "2^5 24499^1"),
    (903797, 342032531, 397265, 2.01678, "739^1 1223^1"),
]

LOW = [
    (44, 113, 25, 0.498394, "2^2 11^1"),
    (51, 197, 44, 0.45178, "3^1 17^1"),
    (75, 293, 68, 0.45992, "3^1 5^2"),
    (102, 197, 95, 0.384071, "2^1 3^1 17^1"),
    (105, 419, 104, 0.484512, "3^1 5^1 7^1"),
    (110, 331, 1, 0.477234, "2^1 5^1 11^1"),
    (130, 389, 129, 0.430084, "2^1 5^1 13^1"),
    (150, 293, 143, 0.396297, "2^1 3^1 5^2"),
    (198, 643, 49, 0.494951, "2^1 3^2 11^1"),
    (210, 419, 209, 0.421704, "2^1 3^1 5^1 7^1"),
    (228, 761, 77, 0.455197, "2^2 3^1 19^1"),
    (246, 883, 145, 0.457522, "2^1 3^1 41^1"),
    (312, 1153, 217, 0.458184, "2^3 3^1 13^1"),
    (420, 1201, 361, 0.453772, "2^2 3^1 5^1 7^1"),
    (462, 1709, 323, 0.48484, "2^1 3^1 7^1 11^1"),
    (528, 2473, 361, 0.48579, "2^4 3^1 11^1"),
    (570, 2221, 511, 0.48907, "2^1 3^1 5^1 19^1"),
]
