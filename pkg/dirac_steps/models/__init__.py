"""Pydantic models and schemas for dirac-steps"""
