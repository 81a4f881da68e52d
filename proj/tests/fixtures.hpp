#ifndef CAUSENT_TESTS_FIXTURES_HPP
#define CAUSENT_TESTS_FIXTURES_HPP

namespace fixtures {

inline const char* kIC = R"(structure IC {
  node A unobserved
  node X observed
  node Z observed
  node Y observed
  edge A -> Z
  edge A -> Y
  edge X -> Z
  edge Z -> Y
})";

inline const char* kBell = R"(structure Bell {
  node A observed
  node B observed
  node C unobserved
  node X observed
  node Y observed
  edge A -> X
  edge C -> X
  edge C -> Y
  edge B -> Y
})";

inline const char* kTriangle = R"(structure Triangle {
  node A unobserved
  node B unobserved
  node C unobserved
  node X observed
  node Y observed
  node Z observed
  edge A -> Y
  edge A -> Z
  edge B -> X
  edge B -> Z
  edge C -> X
  edge C -> Y
})";

// Fig. 3(a): the triangle with one source observed.
inline const char* kFig3a = R"(structure Fig3a {
  node A unobserved
  node B unobserved
  node C observed
  node X observed
  node Y observed
  node Z observed
  edge A -> Y
  edge A -> Z
  edge B -> X
  edge B -> Z
  edge C -> X
  edge C -> Y
})";

// Fig. 3(c): the information-causality variation of the instrumental
// scenario, with two independent inputs and a setting on the second
// measurement.
inline const char* kInfoCausality = R"(structure InfoCausality {
  node X1 observed
  node X2 observed
  node S observed
  node A unobserved
  node Z observed
  node Y observed
  edge X1 -> Z
  edge X2 -> Z
  edge A -> Z
  edge A -> Y
  edge Z -> Y
  edge S -> Y
})";

inline const char* kChain = R"(structure Chain {
  node X observed
  node Z observed
  node Y observed
  edge X -> Z
  edge Z -> Y
})";

}  // namespace fixtures

#endif
