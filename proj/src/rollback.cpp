#include "rr/rollback.hpp"

namespace rr {

Sentence rollback_pass(const Sentence& current, const Sentence& original, int label,
                       GatewayCache& gateway) {
  if (gateway.classify(current).predicted() == label) {
    throw PreconditionError("rollback_pass: input sentence is not misclassified");
  }

  const std::vector<Edit> script = edit_script(current, original);
  std::vector<std::string> working = current.tokens();

  // Descending position order: reverting an edit never shifts the recorded
  // positions of the edits still to be processed.
  for (auto it = script.rbegin(); it != script.rend(); ++it) {
    std::vector<std::string> tentative = working;
    apply_edit(tentative, *it);
    if (tentative.empty()) continue;  // cannot revert the whole sentence away
    Sentence candidate(tentative);
    if (gateway.classify(candidate).predicted() != label) {
      working = std::move(tentative);
    }
  }
  return Sentence(std::move(working));
}

}  // namespace rr
