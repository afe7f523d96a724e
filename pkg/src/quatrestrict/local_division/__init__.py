"""Finite quotients of the units of the local quaternion division algebra and their characters."""
