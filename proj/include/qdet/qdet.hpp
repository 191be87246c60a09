#pragma once

#include "qdet/bayes.hpp"
#include "qdet/bloch.hpp"
#include "qdet/capacity.hpp"
#include "qdet/complex_matrix.hpp"
#include "qdet/eig.hpp"
#include "qdet/errors.hpp"
#include "qdet/group_action.hpp"
#include "qdet/info.hpp"
#include "qdet/io.hpp"
#include "qdet/optim.hpp"
#include "qdet/povm.hpp"
#include "qdet/sic.hpp"
#include "qdet/unambiguous.hpp"
