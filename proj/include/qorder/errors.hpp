#pragma once

#include <stdexcept>
#include <string>

namespace qorder
{

//! A shadow-boundary angle is too close for the asymptotic field to hold.
class boundary_zone_error : public std::domain_error
{
  public:
    using std::domain_error::domain_error;
};

//! Scattering amplitude requested at (or numerically on top of) a pole.
class pole_error : public std::domain_error
{
  public:
    using std::domain_error::domain_error;
};

//! Closed-form approximation requested outside its validity window.
class regime_error : public std::domain_error
{
  public:
    using std::domain_error::domain_error;
};

//! Non-finite values encountered during a simulation.
class numeric_error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//! Aggregation requested before all required inputs exist.
class report_incomplete : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace qorder
