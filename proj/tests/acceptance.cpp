// Runs the full validation suite and prints one PASS/FAIL line per criterion,
// followed by the individual checks behind it.

#include <algorithm>
#include <cstdio>
#include <exception>
#include <string>
#include <thread>

#include "qrabi/config.hpp"
#include "qrabi/validation.hpp"

using namespace qrabi;

namespace {

const char* tag(validation::Status s) {
    switch (s) {
    case validation::Status::pass:
        return "PASS";
    case validation::Status::fail:
        return "FAIL";
    case validation::Status::skipped:
        return "SKIP";
    }
    return "?";
}

}  // namespace

int main() {
    try {
        const auto cfg = config::load_config(std::string(QRABI_SOURCE_DIR) + "/configs/validate.json");
        const int workers = static_cast<int>(std::clamp(std::thread::hardware_concurrency(), 1u, 8u));
        const auto report = validation::run_validation(validation::settings_from(cfg, workers));

        for (const auto& c : report.criteria) {
            std::printf("%s criterion %d: %s (%.1f s)\n", tag(c.status), c.id, c.title.c_str(), c.seconds);
            for (const auto& k : report.checks) {
                if (k.criterion != c.id)
                    continue;
                std::printf("    %s %s: measured %.6g, %s %.6g", tag(k.status), k.name.c_str(), k.measured,
                            k.relation.c_str(), k.target);
                if (k.relation == "within")
                    std::printf(" +- %.3g", k.tolerance);
                std::printf(", margin %.3g", k.margin);
                if (!k.detail.empty())
                    std::printf(" [%s]", k.detail.c_str());
                std::printf("\n");
            }
        }
        std::printf("%s\n", report.passed() ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED");
        return report.passed() ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "acceptance: %s\n", e.what());
        return 2;
    }
}
