#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace rr {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Reserved placeholder for masked positions. Model adapters translate it to
// their backend's native mask symbol; it is never a legal sentence token.
inline constexpr const char* kMaskToken = "<mask>";

struct BackendUnavailableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UndefinedMetricError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An ordered sequence of word tokens. Immutable after construction;
/// never empty and never contains the mask placeholder.
class Sentence {
 public:
  explicit Sentence(std::vector<std::string> tokens,
                    std::optional<std::string> raw = std::nullopt);

  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  const std::optional<std::string>& raw() const noexcept { return raw_; }
  std::size_t size() const noexcept { return tokens_.size(); }
  const std::string& operator[](std::size_t i) const { return tokens_[i]; }

  /// Tokens joined by single spaces. Round-trips through a split on ' '.
  std::string text() const;

  friend bool operator==(const Sentence& a, const Sentence& b) {
    return a.tokens_ == b.tokens_;
  }
  friend bool operator!=(const Sentence& a, const Sentence& b) {
    return !(a == b);
  }

 private:
  std::vector<std::string> tokens_;
  std::optional<std::string> raw_;
};

/// A sentence with a contiguous run of mask placeholders substituted for an
/// m-word span. Carries enough context to undo or fill the span.
class MaskedSentence {
 public:
  MaskedSentence(std::vector<std::string> tokens, std::size_t span_start,
                 std::size_t mask_count, std::vector<std::string> removed_span);

  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  std::size_t span_start() const noexcept { return span_start_; }
  std::size_t mask_count() const noexcept { return mask_count_; }
  const std::vector<std::string>& removed_span() const noexcept {
    return removed_span_;
  }

 private:
  std::vector<std::string> tokens_;
  std::size_t span_start_;
  std::size_t mask_count_;
  std::vector<std::string> removed_span_;
};

struct LabeledExample {
  LabeledExample(Sentence sentence, int label, std::string id);

  Sentence sentence;
  int label;
  std::string id;

  friend bool operator==(const LabeledExample& a, const LabeledExample& b) {
    return a.sentence == b.sentence && a.label == b.label && a.id == b.id;
  }
};

/// Ordered token list with reverse lookup. Tokens are unique; a subset may be
/// flagged special (control symbols excluded from word distributions).
class Vocabulary {
 public:
  explicit Vocabulary(std::vector<std::string> tokens,
                      std::vector<std::string> special = {});

  std::size_t size() const noexcept { return tokens_.size(); }
  const std::string& token(std::size_t i) const { return tokens_[i]; }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  std::optional<std::size_t> index_of(const std::string& token) const;
  bool is_special(std::size_t i) const { return special_[i] != 0; }
  bool has_special() const noexcept { return special_count_ > 0; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<char> special_;
  std::size_t special_count_ = 0;
};

using VocabPtr = std::shared_ptr<const Vocabulary>;

/// Probability vector aligned to a shared vocabulary. Construction checks
/// nonnegativity and unit mass (1e-6 tolerance).
class Distribution {
 public:
  Distribution(VocabPtr vocab, Vector probs);

  /// Normalizes nonnegative weights into a Distribution. Throws on all-zero
  /// or negative weights.
  static Distribution normalized(VocabPtr vocab, Vector weights);

  const Vector& probs() const noexcept { return probs_; }
  const Vocabulary& vocab() const noexcept { return *vocab_; }
  const VocabPtr& vocab_ptr() const noexcept { return vocab_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(probs_.size()); }

  /// Probability of a token; 0 for out-of-vocabulary tokens.
  double prob_of(const std::string& token) const;

 private:
  VocabPtr vocab_;
  Vector probs_;
};

struct CritiqueWeights {
  double w_ppl = 5.0;
  double w_sim = 20.0;
  double phi_sim = 0.95;
  double w_clf = 2.0;
  double w_enforce = 5.0;

  void validate() const;
};

enum class DecisionMode { kStochastic, kGreedy };
enum class RollbackMode { kPeriodic, kSingle, kNone };

struct AttackConfig {
  int span_m = 3;
  int batch_size = 50;
  int max_iterations = 200;
  int rollback_period = 10;
  double early_stop_fraction = 0.5;
  std::uint64_t seed = 0;
  CritiqueWeights weights;
  DecisionMode decision_mode = DecisionMode::kStochastic;
  RollbackMode rollback_mode = RollbackMode::kPeriodic;

  void validate() const;
};

/// Outcome of one attack. Metric fields other than log_ppl_original are
/// meaningful only when success is true.
struct AttackResult {
  bool success;
  std::optional<Sentence> adversarial;
  LabeledExample original;
  double similarity;
  double log_ppl_original;
  double log_ppl_adversarial;
  double log_ppl_ratio;
  double critique;
  int iterations_used;
  std::int64_t classifier_queries;
  int edit_count;

  friend bool operator==(const AttackResult&, const AttackResult&) = default;
};

const char* to_string(DecisionMode mode);
const char* to_string(RollbackMode mode);
DecisionMode decision_mode_from_string(const std::string& name);
RollbackMode rollback_mode_from_string(const std::string& name);

}  // namespace rr
