"""droplab: dropout training and bound verification for Poisson topic models.

The library samples documents from Poisson topic models, trains linear
classifiers on binomially thinned counts, and verifies the analytical
machinery connecting the thinned and raw error rates: Gaussian score
approximations with Berry-Esseen control, the error-exponentiation bound,
posterior preservation under thinning, and topic-margin separability.
"""

from .bounds import (BERRY_ESSEEN_CONSTANT, BerryEsseenReport, BoundReport,
                     MarginReport, RankDeficientError, TailCheckReport,
                     altitude_error_bound, berry_esseen_check,
                     gaussian_error_estimate, gaussian_tail_check,
                     margin_condition, normal_cdf, normal_quantile)
from .classifiers import (DegenerateDataError, DimensionError, EmptyDataError,
                          LinearClassifier, TrainConfig, erm_zero_one_small,
                          error_by_topic, evaluate_error,
                          recalibrate_intercept, train_logistic,
                          train_logistic_dropout, train_naive_bayes)
from .corpus import (Corpus, EmptyClassError, MalformedLineError, SplitSpec,
                     load_corpus, tokenize)
from .diagnostics import (ModelDiagnostics, RiskDecomposition,
                          TopicDiagnostics, ZeroVarianceError,
                          balance_coefficient, berry_esseen_statistic,
                          excess_risk_decomposition, model_diagnostics,
                          score_moments)
from .dropout import (DropoutConfig, dropout_posterior, thin_counts,
                      thinned_model)
from .experiments import (BiasCheckReport, CurveRecord, CurveResult, CurveSpec,
                          InfluenceDemoConfig, InfluenceDemoReport, SweepConfig,
                          SweepResult, curve_csv, curve_summary,
                          run_altitude_sweep, run_bias_check,
                          run_influence_demo, run_learning_curves)
from .streams import make_rng, seed_fingerprint
from .topics import (BayesErrorResult, DiscreteSampler, Document,
                     DocumentBatch, EnumerationTooLargeError,
                     GenerativeSampler, ParametricSampler, Topic, TopicModel,
                     UndefinedPosteriorError, bayes_error, bayes_posterior,
                     build_synthetic_model, sample_document,
                     sample_document_multinomial, sample_documents,
                     sample_documents_multinomial)

__version__ = "0.1.0"
