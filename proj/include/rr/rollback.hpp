#pragma once

#include "rr/edit_script.hpp"
#include "rr/gateway.hpp"
#include "rr/types.hpp"

namespace rr {

/// Reverts, scanning the minimal edit script from right to left, every edit
/// whose reversal keeps the sentence misclassified. Each tentative reversal
/// costs one classifier query; accepted reversals are seen by later probes.
/// The result is always misclassified and never farther from the original
/// than the input. Throws PreconditionError when current is not misclassified.
Sentence rollback_pass(const Sentence& current, const Sentence& original, int label,
                       GatewayCache& gateway);

}  // namespace rr
