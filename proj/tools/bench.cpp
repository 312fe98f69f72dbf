// Benchmark: OpenMP-parallel transfer-matrix kernel vs the serial path vs the
// naive dense-contraction reference, on float-mode distributions.

#include "qnet/cli.hpp"
#include "qnet/engine.hpp"
#include "qnet/reference.hpp"

#include <chrono>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

template <class F>
double time_ms(F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void run_case(const std::string& name, const qnet::CycleNetwork& net, bool with_reference) {
    using namespace qnet;
    Distribution serial, parallel;
    double t_serial = time_ms([&] { serial = cycle_distribution_serial(net); });
    double t_parallel = time_ms([&] { parallel = cycle_distribution_parallel(net); });
    double worst = 0;
    for (std::size_t i = 0; i < serial.size(); ++i)
        worst = std::max(worst, std::abs(serial[i] - parallel[i]));
    std::printf("%-28s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx   max |diff| %.3g\n",
                name.c_str(), t_serial, t_parallel, t_serial / t_parallel, worst);
    if (with_reference) {
        Distribution ref;
        double t_ref = time_ms([&] { ref = reference_distribution(net); });
        double dev = 0;
        for (std::size_t i = 0; i < ref.size(); ++i)
            dev = std::max(dev, std::abs(ref[i] - serial[i]));
        std::printf("%-28s dense reference %9.2f ms   max |diff| vs serial %.3g\n", "",
                    t_ref, dev);
    }
}

}  // namespace

int main() {
    qnet::apply_thread_env();
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP disabled; parallel path runs serially\n");
#endif
    using qnet::Rational;
    run_case("triangle d=2", qnet::triangle_network<double>(Rational(4, 5)), true);
    run_case("qutrit triangle d=3", qnet::qutrit_triangle_network<double>(), true);
    run_case("cycle N=5 d=2", qnet::qubit_cycle_network<double>(5, Rational(4, 5)), true);
    run_case("cycle N=9 d=2", qnet::qubit_cycle_network<double>(9, Rational(4, 5)), false);
    run_case("cycle N=11 d=2", qnet::qubit_cycle_network<double>(11, Rational(4, 5)), false);
    return 0;
}
