"""Published numerical constants used by the height and index machinery.

Every decimal here is stored as an exact ``Fraction`` of the printed value,
so the runtime never depends on binary float rounding of a constant. Lower
bounds are truncations (safe to use as lower bounds), upper bounds are
round-ups.
"""

from fractions import Fraction

# Archimedean lower bound  lambda_inf(P) > log(n)/12 + log|beta/delta^3|/2 + C
ARCH_LOWER_CONSTANT = Fraction("0.31494685")

# Uniform lower bound  h(P) > log(n)/12 - C  for square-free n > 0
UNIFORM_HEIGHT_OFFSET = Fraction("0.147152")

# Trivial bound on the theta series |theta| < 1 + |q| + |q|^3 + ...
THETA_TRIVIAL_BOUND = Fraction("1.16738574713")

# Real period of y^2 = x^3 + 1 and the (real, negative) nome of y^2 = x^3 + n
OMEGA1_UNIT = Fraction("4.206546315")
NOME_Q = Fraction("-0.163033534")

# Tail bounds for z' on E_{a,b} shifted by d = 2a^2+4b^2 or d = 3a^2+4b^2
Z_MAX_FAMILY = Fraction("120.531634")
Z_MIN_FAMILY = {
    "2a2+4b2": Fraction("0.062326"),
    "3a2+4b2": Fraction("0.038068"),
}
D_KINDS = tuple(Z_MIN_FAMILY)

# Hermite constants gamma_s^s for s = 1..4
HERMITE_POWER = {1: Fraction(1), 2: Fraction(4, 3), 3: Fraction(2), 4: Fraction(4)}

# Bounds on h(P_i) - log(m)/3 for the three family points: (lower, upper)
FAMILY_HEIGHT_OFFSETS = {
    1: (Fraction("-0.7441"), Fraction("0.5409")),
    2: (Fraction("-0.7579"), Fraction("1.0515")),
    3: (Fraction("-0.5113"), Fraction("0.5665")),
}

# Bounds on lambda_inf(P_2) - log(m)/3
LAMBDA_INF_P2_OFFSETS = (Fraction("-0.295724"), Fraction("1.513566"))

# Above this m the pair index bound drops below 5; above INDEX7 it is below 7
INDEX5_THRESHOLD = Fraction("6.38e22")
INDEX7_THRESHOLD = 19088
# The exhaustive 5-division sweep covered m below this value
SWEEP_M_LIMIT = Fraction("6.381e22")
