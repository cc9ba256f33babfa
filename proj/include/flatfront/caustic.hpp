#pragma once

#include <optional>

#include "flatfront/end.hpp"
#include "flatfront/front.hpp"

namespace flatfront {

class CausticError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// E-ends are ends of f; U-ends are umbilics of f (zeros of Q).
enum class CausticEndKind { EEnd, UEnd };
std::string to_string(CausticEndKind k);

struct CausticPitch {
    Rational m_c{0}, n_c{0}, p_c{0};  // half-integers allowed before the double cover
    bool complete = false;            // snowman E-end: complete cylindrical, p_c = 0
};

struct CausticData {
    CausticEndKind kind = CausticEndKind::EEnd;
    /// 2 when ord Q is odd: the series below live on the cover w^2 = z
    int cover = 1;
    bool co_orientable = true;
    SeriesOneForm omega_c, theta_c, Q_c;
    Series rho_c;
    /// Q_c against Q + (dlog rho / 4)^2
    double Qc_residual = 0.0;
    /// dlog rho_c against (i sqrt Q / 2Q_c)(S(G_*) - S(G)); 0 when both vanish
    double dlog_residual = 0.0;
    /// orders in the base coordinate z
    Rational ord_Q{0}, ord_S{0};
    bool S_vanishes = false;
    CausticPitch pitch;
};

/// Caustic canonical forms at the point of c. Throws when Q vanishes identically.
CausticData caustic_forms(const CanonicalData& c);

/// n_c = ord Q/2 + ord(S(G_*) - S(G)) + 3 and m_c = ord Q/2 + m_j + 1 (E-end) or ord Q/2 (U-end).
CausticPitch caustic_end_pitch(Rational ord_Q, Rational ord_S, CausticEndKind kind, int m_j = 0,
                               std::optional<EndType> type_j = std::nullopt);

/// Forms, kind and closed-form pitch at a point of the data (an end or an umbilic).
CausticData analyze_caustic(const WeierstrassData& data, ExpansionPoint at);

/// Lift of the caustic from its canonical forms, by Frobenius series at the regular
/// singular point. Coordinates are those of cd (the cover when cd.cover = 2).
LocalLift caustic_lift(const CausticData& cd);

/// classify_end on the caustic lift; orders are on the cover when cd.cover = 2.
EndReport classify_caustic(const CausticData& cd);

}  // namespace flatfront
