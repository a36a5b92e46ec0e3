// params.hpp - Cavity and emitter parameters, unit handling

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cqed {

enum class UnitTag {
    kappa_units, // rates and frequencies already expressed relative to kappa
    ghz_2pi,     // values in GHz; angular values are 2*pi times larger
};

std::string_view to_string(UnitTag unit);
UnitTag unit_from_string(std::string_view text);

struct Emitter {
    double omega{0.0}; // transition frequency
    double gamma{0.0}; // decay rate into loss channels
    double g{0.0};     // coupling to the cavity mode
};

struct SystemParams {
    double omega_c{0.0};
    double kappa_b{0.5}; // input waveguide
    double kappa_c{0.5}; // output waveguide
    std::vector<Emitter> emitters;
    UnitTag unit{UnitTag::kappa_units};

    double kappa() const noexcept { return kappa_b + kappa_c; }
    std::size_t size() const noexcept { return emitters.size(); }
};

// Throws InvalidParams when a rate is negative, a value is not finite or the
// total cavity decay rate is zero.
void validate(const SystemParams& params);

// Factor converting a frequency given in the params' source unit into
// kappa-normalized angular frequency. Times scale by the inverse.
double frequency_scale(const SystemParams& params);

// Factor converting a delay in the source time unit (1/kappa for kappa_units,
// ns for ghz_2pi) into units of 1/kappa.
double time_scale(const SystemParams& params);

// Copy with every rate and frequency divided by kappa, so kappa() == 1.
// The unit tag is preserved as a record of the source unit.
SystemParams normalized(const SystemParams& params);

// N emitters sharing omega_e, gamma and g.
SystemParams identical_system(double omega_c, double kappa_b, double kappa_c,
                              double omega_e, double gamma, double g, std::size_t n);

// Parameters of the shared emitter when every emitter is identical.
std::optional<Emitter> common_emitter(const SystemParams& params);

} // namespace cqed
