"""Published zero tables and reference constants shared across the test suite."""

# Critical-line zeros of I(T, s), first 15 ordinates.
TABLE1_T1 = [
    7.769080112, 11.01900402, 13.11079833, 15.58052582, 17.07367093,
    19.21539818, 20.83659268, 22.24754162, 24.26973459, 25.39649716,
    26.95610030, 28.59571466, 29.93119639, 31.03561085, 32.83737170,
]
TABLE1_YSTAR = [
    1.570199673, 3.136172650, 4.688303082, 6.172131737, 7.073883755,
    7.990000858, 9.408931700, 10.42818054, 11.18590514, 12.29085328,
    12.94293137, 14.21495758, 15.15516152, 15.87628765, 16.56289948,
]

# Critical-line zeros of a0(y, s), first 15 ordinates.
TABLE2_Y1 = [
    6.974683133, 10.40228756, 12.42264167, 15.08382464, 16.40456028,
    18.68201963, 20.34995710, 21.60499108, 23.85087057, 24.83364580,
    26.40277087, 28.11180718, 29.54150449, 30.39424164, 32.41487455,
]
TABLE2_YSTAR = [
    2.244794235, 3.851296383, 5.404657031, 6.732441081, 7.383718196,
    8.670185248, 10.02271471, 10.69728308, 11.78575276, 12.56610869,
    13.53142535, 14.79167003, 15.42550847, 16.28902291, 16.93621484,
]

# Ordinates of the nontrivial zeta zeros below 50 (10 of them).
ZETA_ZEROS_BELOW_50 = [
    14.134725142, 21.022039639, 25.010857580, 30.424876126, 32.935061588,
    37.586178159, 40.918719012, 43.327073281, 48.005150881, 49.773832478,
]

XI_LOGDERIV_AT_ZERO = -0.0230957089661210
Y_STAR_REF = 7.05550795544818
