#ifndef TOF_TESTS_HELPERS_HPP
#define TOF_TESTS_HELPERS_HPP

#include <string>
#include <utility>

#include "tof/model.hpp"

namespace tof_test {

// Runs f and reports whether it threw tof::Error with the wanted code.
template <class F>
bool throws_code(tof::ErrorCode want, F&& f) {
    try {
        std::forward<F>(f)();
    } catch (const tof::Error& e) {
        return e.code() == want;
    } catch (...) {
        return false;
    }
    return false;
}

// Sodium reference configuration: 1 um packets split by 50 um, detector
// 1 cm below the release point.
inline tof::CatConfig reference_config() {
    tof::CatConfig cfg;
    cfg.particle = tof::sodium();
    cfg.sigma0 = 1e-6;
    cfg.d = 5e-5;
    cfg.detector_H = -0.01;
    return cfg;
}

}  // namespace tof_test

#endif  // TOF_TESTS_HELPERS_HPP
