"""decouplab: semi-blind sub-6 GHz / mmWave uplink-downlink decoupling lab."""

from .baseline import BandOffsets, baseline_dsr, estimate_offsets, threshold_classify
from .channel import (BandParams, ClusterGeometry, PropagationParams, TrackSpec,
                      default_geometry, default_params, los_probability, los_state,
                      make_track, path_loss_db, sample_measurement, synth_dataset)
from .config import RunConfig, default_run_config, default_tracks, load_run_config
from .datasets import (BAND_MMWAVE, BAND_SUB6, MeasurementSample, read_samples_csv,
                       sub6_features, write_samples_csv)
from .evaluation import (AccuracyCurve, Curve, DsrCurve, EvalConfig, run_dsr_sweep,
                         run_kernel_comparison)
from .labeling import (DecouplingClass, Thresholds, label_dataset, label_sample,
                       select_target_aps)
from .pca import PcaModel, pca_fit, pca_project, pca_reconstruct
from .preprocess import (FeatureMatrix, ScalerParams, feature_matrix, scaler_apply,
                         scaler_fit, scaler_invert, shuffle, split)
from .svm import (BinaryModel, MulticlassModel, SvmParams, accuracy_score, dual_objective,
                  kernel_eval, kernel_matrix, load_model, predict, save_model, smo_solve,
                  train_binary, train_ovo)

__version__ = "0.1.0"
