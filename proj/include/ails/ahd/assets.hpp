#ifndef AILS_AHD_ASSETS_HPP
#define AILS_AHD_ASSETS_HPP

namespace ails::ahd::assets {

// Host script that loads a candidate module and serves the stdio protocol.
extern const char* kCandidateHost;

// Built-in heuristics expressed as candidate modules. kSeedCandidate seeds
// the evolution population; kEnCandidate mirrors the native expanding-
// neighborhood heuristic and anchors the protocol equivalence tests.
extern const char* kSeedCandidate;
extern const char* kSeedCandidateDescription;
extern const char* kEnCandidate;
extern const char* kEnCandidateDescription;

}  // namespace ails::ahd::assets

#endif
