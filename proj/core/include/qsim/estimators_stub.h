#pragma once
#include "qsim/state_vector.hpp"
