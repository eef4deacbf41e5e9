#include "quadgk.hpp"

namespace quadgk
{

// QUADPACK 15-point Kronrod / 7-point Gauss rule.
const std::array<real, 8> GK15::x_gk = {
   0.991455371120812639206854697526329L,
   0.949107912342758524526189684047851L,
   0.864864423359769072789712788640926L,
   0.741531185599394439863864773280788L,
   0.586087235467691130294144838258730L,
   0.405845151377397166906606412076961L,
   0.207784955007898467600689403773245L,
   0.000000000000000000000000000000000L,
};

const std::array<real, 8> GK15::w_gk = {
   0.022935322010529224963732008058970L,
   0.063092092629978553290700663189204L,
   0.104790010322250183839876322541518L,
   0.140653259715525918745189590510238L,
   0.169004726639267902826583426598550L,
   0.190350578064785409913256402421014L,
   0.204432940075298892414161999234649L,
   0.209482141084727828012999174891714L,
};

const std::array<real, 4> GK15::w_g = {
   0.129484966168869693270611432679082L,
   0.279705391489276667901467771423780L,
   0.381830050505118944950369775488975L,
   0.417959183673469387755102040816327L,
};

} // namespace quadgk
