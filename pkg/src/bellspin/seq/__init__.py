"""Pulse-program language, executor and built-in Bell-state programs."""

from .builtin import builtin_program, shipped_program_path, shipped_program_text, step1_program
from .executor import ExecutionTrace, PPSWarning, execute, gradient_crush, pps_amplitude, pps_prepare
from .parser import ProgramError, PulseSemanticError, PulseSyntaxError, parse, parse_file
from .program import CP, DHH, AcquireFID, Delay, Gradient, PPSPrepare, Pulse, PulseProgram, Quantity, format_program
