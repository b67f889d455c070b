#pragma once

// Phase orchestration behind the CLI: builds the problem, the blowup curve
// and the front once, and writes the CSV products of each subcommand.

#include <filesystem>
#include <memory>
#include <ostream>
#include <vector>

#include "shockform/config.hpp"

namespace shockform {

class Pipeline {
 public:
  explicit Pipeline(RunConfig cfg);
  Pipeline(const Pipeline&) = delete;
  Pipeline& operator=(const Pipeline&) = delete;
  ~Pipeline();

  const RunConfig& config() const { return cfg_; }
  const Problem& problem() const { return *problem_; }

  /// Never throws for condition failures (they are in the report).
  const GncReport& gnc();
  /// Throws the condition failure when GNC does not hold.
  const BlowupCurve& curve();
  /// Throws ConfigInvalid when epsilon > T*0 / 4.
  const ShockFront& front();

  using Files = std::vector<std::filesystem::path>;
  Files write_analysis(const std::filesystem::path& dir, std::ostream& log);
  Files write_curve(const std::filesystem::path& dir, std::ostream& log);
  Files write_front(const std::filesystem::path& dir, std::ostream& log);
  Files write_field(const std::filesystem::path& dir, std::ostream& log);
  Files write_reference(const std::filesystem::path& dir, std::ostream& log);

 private:
  RunConfig cfg_;
  std::unique_ptr<Problem> problem_;
  std::unique_ptr<GncReport> gnc_;
  std::unique_ptr<BlowupCurve> curve_;
  std::unique_ptr<ShockFront> front_;
  std::unique_ptr<ShockFront> fv_front_;
};

}  // namespace shockform
