"""Logging, exceptions and file helpers"""
