import math

# Link setup of the reference scenario: 128-element half-wavelength ULAs on
# both ends, 4 RF chains / streams, 10 clusters of 10 rays, 2.5 deg spread
# and a 6-bit (64 angle) beamsteering codebook.
ANTENNAS = 128
SPACING = 0.5
STREAMS = 4
CODEBOOK_BITS = 6
CLUSTERS = 10
RAYS = 10
ANGLE_SPREAD_DEG = 2.5
POWER_PROFILE = "exponential07"
AOD_RANGE_DEG = (0.0, 360.0)
AOA_SECTOR_DEG = 60.0

SNR_DB_GRID = (-20.0, -15.0, -10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0)
ANTENNA_GRID = (16, 32, 64, 128, 256)
STREAM_GRID = (1, 2, 4, 8)
FIXED_SNR_DB = 20.0

TRIALS = 500
SEED = 2017
WORKERS = 1

TWO_PI = 2.0 * math.pi
