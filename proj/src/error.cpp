#include "gmotelab/error.hpp"

namespace gmotelab {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::not_positive_definite: return "NotPositiveDefinite";
    case Errc::empty_data: return "EmptyData";
    case Errc::too_many_components: return "TooManyComponents";
    case Errc::too_few_instances: return "TooFewInstances";
    case Errc::too_few_minority: return "TooFewMinority";
    case Errc::no_danger_points: return "NoDangerPoints";
    case Errc::no_clusters: return "NoClusters";
    case Errc::insufficient_sample_size: return "InsufficientSampleSize";
    case Errc::acceptance_starvation: return "AcceptanceStarvation";
    case Errc::single_class: return "SingleClass";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::empty_counts: return "EmptyCounts";
    case Errc::class_too_small: return "ClassTooSmall";
    case Errc::missing_column: return "MissingColumn";
    case Errc::malformed_header: return "MalformedHeader";
    case Errc::non_numeric_feature: return "NonNumericFeature";
    case Errc::io_error: return "IoError";
    case Errc::parse_error: return "ParseError";
    case Errc::unknown: return "Unknown";
  }
  return "Unknown";
}

}  // namespace gmotelab
