#pragma once

#include <optional>
#include <set>
#include <string>

#include "trisketch/certificate.hpp"
#include "trisketch/graph.hpp"

namespace trisketch {

struct VerifyVerdict {
  enum class Kind { AcceptNo, AcceptYes, RejectCoverage, RejectReplay };

  Kind kind = Kind::AcceptNo;
  std::optional<TriangleClaim> triangle;  // AcceptYes
  std::set<ShouldCheckKey> missing;       // RejectCoverage: in Q, not logged
  std::set<ShouldCheckKey> extra;         // RejectCoverage: logged, not in Q
  std::string path;                       // RejectReplay: offending certificate field
  std::string detail;

  bool accepted() const { return kind == Kind::AcceptNo || kind == Kind::AcceptYes; }

  static VerifyVerdict accept_no() { return {}; }
  static VerifyVerdict accept_yes(TriangleClaim t) { return {Kind::AcceptYes, t, {}, {}, {}, {}}; }
  static VerifyVerdict reject_replay(std::string path, std::string detail) {
    return {Kind::RejectReplay, std::nullopt, {}, {}, std::move(path), std::move(detail)};
  }
};

std::string_view to_string(VerifyVerdict::Kind k);
/// One-line human summary ("AcceptNo", "RejectReplay class_logs[2].sigma: ...").
std::string describe(const VerifyVerdict& v);

/// The obligated checks Q, rebuilt from the graph and the public seeds alone.
/// Throws ParamMismatch when the seeds were configured for another n.
std::set<ShouldCheckKey> reconstruct_should_check_domain(const OrientedGraph& g, const SeedsRecord& seeds);

/// Full replay of a certificate against the graph. YES certificates are
/// delegated to verify_yes.
VerifyVerdict verify_no(const OrientedGraph& g, const Certificate& cert);

/// Checks the three adjacencies of a YES claim; nothing else.
VerifyVerdict verify_yes(const OrientedGraph& g, const Certificate& cert);

}  // namespace trisketch
