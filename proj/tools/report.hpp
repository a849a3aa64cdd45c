#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "isopoly/norm_engine.hpp"

namespace isopoly::report {

enum class Status { Pass, Fail, HypothesisFailed, InputError, Budget, Indeterminate };

std::string to_string(Status s);
Status parse_status(const std::string& text);

using Fields = std::vector<std::pair<std::string, std::string>>;

struct TrialRecord {
  std::size_t trial = 0;
  std::string lemma;
  Fields instance;
  Status status = Status::Pass;
  std::string message;
  Fields measured;
};

struct Header {
  std::string lemma;
  std::string space;
  std::string seed;
  std::string trials;
  bool violate = false;
  std::string timestamp;
};

/// First line: the header (the only line carrying a timestamp); then one record per trial.
void write_jsonl(std::ostream& out, const Header& header, const std::vector<TrialRecord>& records);
std::vector<TrialRecord> read_jsonl(std::istream& in, Header* header = nullptr);

struct Summary {
  std::string lemma;
  std::size_t counts[6] = {0, 0, 0, 0, 0, 0};
  std::size_t total() const;
  std::size_t count(Status s) const { return counts[static_cast<int>(s)]; }
};

std::vector<Summary> summarize(const std::vector<TrialRecord>& records);
void write_csv(std::ostream& out, const std::vector<Summary>& summary);

/// Exit status for a batch: 1 on any failed verdict, 3 on budget or indeterminate outcomes,
/// 2 on hypothesis or input errors, else 0. In negative-control mode every trial must be
/// rejected by a hypothesis check; anything else counts as a failed verdict.
int exit_code(const std::vector<TrialRecord>& records, bool negative_control);

// Certificates are key = value text. Loading re-validates: the witness is re-evaluated
// against the stated value and its membership in M is re-checked.

std::string format_member(const MMember& member);
MMember parse_member(const std::string& text, const BaseSpaceId& space, const BlockSystem& blocks);

std::string format_norm_certificate(const NormCertificate& cert, const SparseVector& x, const BaseSpaceId& space);
struct LoadedNorm {
  SparseVector x;
  NormCertificate cert;
};
LoadedNorm load_norm_certificate(const std::string& text, const BaseSpaceId& space, const BlockSystem& blocks);

std::string format_dual_certificate(const DualNormCertificate& cert, const SparseVector& f, const BaseSpaceId& space);
struct LoadedDual {
  SparseVector f;
  DualNormCertificate cert;
};
LoadedDual load_dual_certificate(const std::string& text, const BaseSpaceId& space, const BlockSystem& blocks);

}  // namespace isopoly::report
