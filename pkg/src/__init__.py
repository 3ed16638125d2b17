# Mendelian diploid birth-death simulator
