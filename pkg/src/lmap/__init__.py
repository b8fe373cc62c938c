from lmap.services.alignment import align_pair, dtw
from lmap.services.bench import generate
from lmap.services.classifier import classify, evaluate_cross, evaluate_loocv, train_classifier
from lmap.services.dataset import load_dataset, write_dataset
from lmap.services.gp import fit_model_set, fit_wrench_model, log_marginal_likelihood
from lmap.services.similarity import extract_features, hellinger_gp
from lmap.services.trajectory import load_trajectory, relativize_to_goal, save_trajectory
