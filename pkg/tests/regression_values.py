"""Reference values computed once with mpmath at 40 digits, frozen at 12+ digits.

Gaussian quantities use Phi^-1(p) = sqrt(2) erfinv(2p - 1) and J = phi o Phi^-1.
"""

GAUSS_J_03 = 0.347692614200074
GAUSS_BOUND_03_02 = 0.455460252340295          # J(0.2) + J(0.1)
GAUSS_K_025_01 = 0.0653209880990727            # J(0.2) - J(0.25) + J(0.05)
GAUSS_L_025_01 = 0.0395803258385499            # J(0.05) - 0.2 J(0.25)
GAUSS_K_03_02 = 0.107767638140221
GAUSS_L_03_02 = 0.0596007938657956
GAUSS_K_03_045 = 0.35037860307633               # second branch
GAUSS_L_03_045 = 0.18815417450869

GAUSS_MU_M1_1 = 0.682689492137086              # mu((-1, 1))
GAUSS_J_MU_M1_1 = 0.356342951939874
GAUSS_P_M1_1 = 0.483941449038287               # 2 phi(1)
GAUSS_DELTA_M1_1 = 0.127598497098412

GAUSS_Q_0841344746 = 0.99999999971673
GAUSS_Q_02 = -0.841621233572914
GAUSS_Q_09 = 1.2815515655446
GAUSS_J_1EM4 = 3.95847966759935e-4

GAUSS_RATIOS = {                                # K(1/4, y) / ((y/2) sqrt(2 ln(2/y)))
    1e-3: 0.738430740152752,
    1e-4: 0.774484623123328,
    1e-5: 0.799507494365368,
    1e-6: 0.818163341090474,
    1e-7: 0.832734897243991,
    1e-8: 0.844503955868272,
}

GAUSS_EX_MU = 0.0825167750635807               # mu((-inf,-2) u (-0.1, 0.05))
GAUSS_EX_SIGMA = 1.38833995813002
GAUSS_TAIL_W = 0.00904368021935256             # mass of (-inf,-3) u (-2.5,-2.2)
GAUSS_TAIL_Q_W = -2.36382487280786
GAUSS_TAIL_P_BEFORE = 0.057434741751738
GAUSS_TAIL_P_AFTER = 0.0244097521596946
