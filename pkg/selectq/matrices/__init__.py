from selectq.matrices.matrices import Matrix, matmul, naive_matmul, identity, generate, random
from selectq.matrices.optim import AdamState, adam_step
from selectq.matrices.rng import SeededRng
from selectq.matrices.stats import mean_ci95, standard_error, uniformity_pvalue
