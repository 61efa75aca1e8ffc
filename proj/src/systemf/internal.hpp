#pragma once

#include "pwb/systemf.hpp"

namespace pwb::sf {

Type subst_type_at(const Type& t, int k, const Type& s);
Term shift_term(const Term& t, int d, int cutoff);
Term shift_tyvars(const Term& t, int d, int cutoff);
// Contracts a redex: body[0 := arg] with the remaining free variables lowered.
Term beta_subst(const Term& body, const Term& arg);
Term beta_type_subst(const Term& body, const Type& arg);
UTerm ushift(const UTerm& t, int d, int cutoff);
UTerm ubeta_subst(const UTerm& body, const UTerm& arg);

}  // namespace pwb::sf
