#include "ixdrl/common.hpp"

#include <cstdio>

namespace ixdrl {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::ManifestMismatch: return "ManifestMismatch";
    case ErrorCode::NonContiguousTimesteps: return "NonContiguousTimesteps";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::EmptySequence: return "EmptySequence";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingleCluster: return "SingleCluster";
    case ErrorCode::RangeInvalid: return "RangeInvalid";
    case ErrorCode::DimensionUnknown: return "DimensionUnknown";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyTrainSet: return "EmptyTrainSet";
    case ErrorCode::EmptyTestSet: return "EmptyTestSet";
    case ErrorCode::TooManyFeatures: return "TooManyFeatures";
    case ErrorCode::ModelGatedOut: return "ModelGatedOut";
    case ErrorCode::SteppingTerminal: return "SteppingTerminal";
  }
  return "Unknown";
}

bool is_data_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedRecord:
    case ErrorCode::ManifestMismatch:
    case ErrorCode::NonContiguousTimesteps:
    case ErrorCode::EmptyDataset:
    case ErrorCode::EmptySequence:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::EmptyTrainSet:
    case ErrorCode::EmptyTestSet:
      return true;
    default:
      return false;
  }
}

unsigned resolve_jobs(unsigned jobs) {
  if (jobs != 0) return jobs;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

std::string format_double(double v) {
  if (v == 0.0) return "0";  // folds -0 so artifacts never print "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace ixdrl
