"""Newton iteration, Sierpinski series and Hurwitz continued fractions for
relatively quadratic units over the Gaussian and Eisenstein fields."""

__version__ = "0.1.0"
