// errors.cpp - Message formatting for exceptions carrying numeric context

#include "cqed/errors.hpp"

#include <sstream>

namespace cqed {

namespace {

std::string format_message(std::complex<double> eigenvalue, const std::string& detail) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "defective matrix at eigenvalue " << eigenvalue.real() << (eigenvalue.imag() < 0 ? " - " : " + ")
        << std::abs(eigenvalue.imag()) << "i: " << detail;
    return msg.str();
}

std::string format_message(double omega_L, double transmission) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "transmission " << transmission << " at omega_L = " << omega_L
        << " is below the floor; sample adjacent frequencies instead of the exact zero";
    return msg.str();
}

} // namespace

DefectiveMatrix::DefectiveMatrix(std::complex<double> eigenvalue, const std::string& detail)
    : Error(format_message(eigenvalue, detail)),
      eigenvalue_(eigenvalue) {}

TransmissionZero::TransmissionZero(double omega_L, double transmission)
    : Error(format_message(omega_L, transmission)),
      omega_L_(omega_L), transmission_(transmission) {}

} // namespace cqed
