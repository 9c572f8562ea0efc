"""Published reference values used by the acceptance suite."""

# (d, h mod 9, regulator class mod 3) for the subfields of Q(sqrt 110, sqrt 170, sqrt 161, sqrt 38, sqrt 14)
TABLE_T5 = [
    (14, 1, 1), (385, 2, 2), (38, 1, 1), (1045, 4, 2),
    (133, 1, 2), (14630, 8, 1), (161, 1, 1), (17710, 8, 2),
    (46, 1, 2), (1265, 2, 1), (6118, 4, 2), (168245, 8, 1),
    (437, 1, 1), (48070, 8, 2), (170, 4, 1), (187, 2, 2),
    (595, 4, 2), (2618, 4, 1), (1615, 4, 2), (7106, 4, 1),
    (22610, 8, 1), (24871, 8, 2), (27370, 7, 2), (30107, 8, 1),
    (1955, 4, 1), (8602, 4, 2), (260015, 5, 1), (1144066, 7, 2),
    (74290, 8, 2), (81719, 8, 1), (110, 2, 1),
]

# (d, 3-part of h, regulator class mod 3 or None for d < 0), t = 6 example
TABLE_T6 = [
    (-14, 1, None), (-5, 1, None), (17, 1, 1), (1190, 1, 1),
    (-238, 1, None), (-85, 1, None), (-19, 1, None), (-1330, 3, None),
    (266, 1, 1), (95, 1, 1), (-323, 1, None), (-22610, 1, None),
    (4522, 1, 2), (1615, 1, 2), (-118, 3, None), (-2065, 3, None),
    (413, 1, 1), (590, 1, 1), (-2006, 3, None), (-35105, 1, None),
    (7021, 1, 2), (10030, 1, 2), (2242, 1, 2), (39235, 1, 2),
    (-7847, 1, None), (-11210, 1, None), (38114, 1, 1), (666995, 1, 1),
    (-133399, 3, None), (-190570, 1, None), (59, 1, 1), (4130, 1, 1),
    (-826, 3, None), (-295, 1, None), (1003, 1, 2), (70210, 1, 2),
    (-14042, 1, None), (-5015, 1, None), (-1121, 1, None), (-78470, 9, None),
    (15694, 1, 2), (5605, 1, 2), (-19057, 1, None), (-1333990, 1, None),
    (266798, 1, 1), (95285, 1, 1), (-2, 1, None), (-35, 1, None),
    (7, 1, 2), (10, 1, 2), (-34, 1, None), (-595, 1, None),
    (119, 1, 1), (170, 1, 1), (38, 1, 1), (665, 1, 1),
    (-133, 1, None), (-190, 1, None), (646, 1, 2), (11305, 1, 2),
    (-2261, 9, None), (-3230, 9, None), (70, 1, 2),
]

# real t = 5 tuples, 3 possibly ramified, pool [1, 300]
GREENBERG_RAMIFIED = [
    (118, 178, 31, 46, 211), (274, 291, 66, 118, 262), (22, 193, 13, 262, 163),
    (37, 274, 31, 211, 46), (31, 130, 166, 129, 246), (298, 13, 7, 111, 210),
    (201, 157, 57, 55, 219), (255, 282, 165, 298, 118), (19, 211, 61, 166, 217),
    (39, 30, 129, 111, 166), (187, 246, 39, 145, 31), (66, 265, 246, 219, 157),
    (55, 219, 217, 102, 205), (193, 262, 163, 10, 127), (37, 61, 273, 205, 21),
    (255, 115, 259, 193, 7), (31, 187, 145, 246, 39),
]

# t = 5 tuples with 3 unramified, pool [2, 300]
GREENBERG_UNRAMIFIED = [
    (91, 230, 209, 194, 221), (149, 335, 301, 55, 31), (145, 157, 230, 209, 194),
    (35, 193, 301, 149, 263), (226, 239, 130, 158, 259), (190, 259, 143, 70, 290),
    (266, 59, 17, 10, 70), (194, 11, 283, 187, 31), (107, 227, 34, 130, 230),
    (13, 17, 215, 31, 61), (145, 133, 218, 34, 230), (22, 215, 221, 31, 161),
    (86, 149, 170, 146, 145), (158, 259, 226, 146, 47), (146, 26, 269, 166, 190),
    (46, 170, 38, 133, 187), (190, 119, 97, 14, 263), (203, 227, 221, 194, 143),
    (239, 89, 262, 53, 166), (13, 262, 193, 163, 286),
]

# t = 5 tuples from the pool [1000, 1350]
GREENBERG_LARGE = [
    (1245, 1303, 1218, 1291, 1123), (1177, 1003, 1309, 1173, 1054), (1321, 1065, 1173, 1231, 1207),
    (1155, 1326, 1111, 1105, 1093), (1173, 1281, 1254, 1327, 1209), (1030, 1174, 1177, 1218, 1015),
]

ALL_P_RATIONAL_150 = [
    -1, -2, -3, -5, -6, -10, -11, -13, -19, -22, -26, -29,
    -37, -38, -43, -53, -58, -59, -61, -67, -74, -83, -86, -101,
    -106, -109, -118, -122, -131, -134, -139, -149,
]

# non-{P}-rational Q(sqrt d), |d| <= 1000, keyed by p
INCOMPLETE = {
    3: [-107, -302, -362, -419, -503, -509, -533, -602, -617, -713, -863, -974],
    5: [-166, -439, -449, -479, -601, -611, -739, -761, -874],
    7: [-374, -530, -794, -831, -859, -894],
    11: [-758],
    13: [-458, -998],
    17: [-383],
}

# full-scale density counts over [1, 10^6]
DENSITY_REAL = {"N3": 315551, "N": 531938, "ratio": 0.59321}
DENSITY_REAL_POOL = {"N3": 180717, "N": 303961, "ratio": 0.59454}
DENSITY_REAL_UNRAMIFIED_RATIO = 0.59185
DENSITY_IMAGINARY = {"N3": 462125, "N": 531934, "ratio": 0.868}
