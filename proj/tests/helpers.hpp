#pragma once

#include "phasebound/phasebound.hpp"

namespace testutil {

inline phasebound::Potential catalog(phasebound::PotentialKind kind, double U0, double d, double h1 = 0.0,
                                     double h2 = 0.0) {
    phasebound::PotentialParams p;
    p.U0 = U0;
    p.d = d;
    p.h1 = h1;
    p.h2 = h2;
    return phasebound::make_potential(kind, p);
}

inline phasebound::Potential delta(double G) {
    phasebound::PotentialParams p;
    p.G = G;
    return phasebound::make_potential(phasebound::PotentialKind::Delta, p);
}

inline phasebound::Potential sech(double U0, double d) { return catalog(phasebound::PotentialKind::Sech, U0, d); }
inline phasebound::Potential lorentzian(double U0, double d) {
    return catalog(phasebound::PotentialKind::Lorentzian, U0, d);
}
inline phasebound::Potential exponential(double U0, double d) {
    return catalog(phasebound::PotentialKind::Exponential, U0, d);
}
inline phasebound::Potential top_gate(double U0, double h1, double h2) {
    return catalog(phasebound::PotentialKind::TopGate, U0, 1.0, h1, h2);
}

} // namespace testutil
