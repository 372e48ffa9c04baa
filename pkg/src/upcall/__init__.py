"""Two-stage right-whale upcall detector.

Stage 1 gates out segments with no in-band energy excess; stage 2 classifies
the survivors using either contour geometry features or local-binary-pattern
texture features, with a roster of from-scratch binary classifiers and
ROC/AUC evaluation. Ships with a seeded synthetic-signal generator so the
whole chain can be exercised and validated at desk scale.
"""

from .audio import (AudioSegment, CorpusItem, SynthSpec, read_wav, segment,
                    synth_segment, write_wav)
from .classifiers import (ALGORITHMS, ClassifierModel, Dataset, KernelSpec,
                          kernel_eval, load_model, predict_score, save_model,
                          train)
from .contours import (Blob, BinaryImage, CandidateOutcome, MergePolicy, TFP2,
                       binarize, detect_candidate, extract_tfp2, filter_blobs,
                       label_components, merge_blobs, trace_boundary)
from .errors import ConfigError, ConvergenceError, DataError, UpcallError
from .evaluation import (ConfusionCounts, RateReport, ROCCurve, auc,
                         detection_rates, roc_curve)
from .gate import GateConfig, GateDecision, stage1_gate
from .lbp import (LBPConfig, LBPFeature, LBPImage, UniformTable, build_u2_table,
                  lbp_image, lbp_label, regional_histograms, transition_count)
from .pipeline import (PipelineConfig, DetectionRecord, DetectResult,
                       run_compare, run_detect, run_train)
from .spectrogram import (EqualizationBounds, Spectrogram, SpectrogramParams,
                          bandpass_crop, equalize, normalize, stft)

__version__ = "0.1.0"
